//! Exact and numerical checks for quantized cluster varieties.
//!
//! Seeds and mutation live in [`seed`] and [`classical`]; the quantum torus
//! and its twisted extension in [`qtorus`] and [`twisted`]; the affine
//! residual words in [`affine`]; `Ψ` series identities in [`series`];
//! floating-point `Φ` in [`qdilog`].

pub mod affine;
pub mod classical;
pub mod error;
pub mod explorer;
pub mod format;
pub mod qdilog;
pub mod qlaurent;
pub mod qtorus;
pub mod ratmat;
pub mod rep;
pub mod seed;
pub mod series;
pub mod twisted;

pub use classical::{PointState, Step, Word};
pub use error::{Error, Result};
pub use explorer::FeedFingerprint;
pub use format::SeedFile;
pub use qlaurent::QLaurent;
pub use qtorus::QTorusElement;
pub use seed::{Feed, Permutation, Rank2Type, Seed, SeedKind};
