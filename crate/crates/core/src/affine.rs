//! The group `SL±(n,ℚ) ⋉ ℚⁿ` of special affine maps `a ↦ a·c + t`, the
//! matrices attached to mutations, and the residual words left over after
//! the dilogarithm factors of a rank-2 relation have been cancelled.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratmat::{rat, RatMatrix};
use crate::rep::mutation_c;
use crate::seed::{Feed, Permutation, Rank2Type};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    c: RatMatrix,
    t: Vec<BigRational>,
}

impl AffineElement {
    pub fn new(c: RatMatrix, t: Vec<BigRational>) -> Result<Self> {
        if !c.is_square() || c.rows() != t.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix with translation of length {}",
                c.rows(),
                c.cols(),
                t.len()
            )));
        }
        let det = c.det()?;
        if det.abs() != rat(1) {
            return Err(Error::NotUnimodular(format!("det = {det}")));
        }
        Ok(AffineElement { c, t })
    }

    pub fn linear(c: RatMatrix) -> Result<Self> {
        let n = c.rows();
        AffineElement::new(c, vec![BigRational::zero(); n])
    }

    pub fn identity(n: usize) -> Self {
        AffineElement {
            c: RatMatrix::identity(n),
            t: vec![BigRational::zero(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.c
    }

    pub fn translation(&self) -> &[BigRational] {
        &self.t
    }

    pub fn is_identity(&self) -> bool {
        self.c.is_identity() && self.t.iter().all(Zero::is_zero)
    }

    /// `(c, t)(c', t') = (cc', tc' + t')`.
    pub fn compose(&self, other: &AffineElement) -> Result<AffineElement> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "composing rank {} with rank {}",
                self.n(),
                other.n()
            )));
        }
        let c = self.c.try_mul(&other.c)?;
        let t = other
            .c
            .left_apply(&self.t)
            .into_iter()
            .zip(&other.t)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AffineElement { c, t })
    }

    /// `(c⁻¹, -t c⁻¹)`.
    pub fn inverse(&self) -> AffineElement {
        let cinv = self.c.inverse().expect("unimodular matrices are invertible");
        let t = cinv.left_apply(&self.t).into_iter().map(|x| -x).collect();
        AffineElement { c: cinv, t }
    }

    /// The point map `a ↦ a·c + t`.
    pub fn act(&self, a: &[BigRational]) -> Vec<BigRational> {
        self.c
            .left_apply(a)
            .into_iter()
            .zip(&self.t)
            .map(|(x, y)| x + y)
            .collect()
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.t.iter().map(ToString::to_string).collect();
        write!(f, "(c={}, t=[{}])", self.c, t.join(", "))
    }
}

pub fn mutation_c_matrix(feed: &Feed, k: usize) -> Result<AffineElement> {
    if k >= feed.n() {
        return Err(Error::IndexOutOfRange { index: k, n: feed.n() });
    }
    AffineElement::linear(mutation_c(feed, k))
}

/// Unipotent matrix with `c_ik = -ε_ki` for `i ≠ k`.
pub fn gaussian_matrix(feed: &Feed, k: usize) -> Result<AffineElement> {
    if k >= feed.n() {
        return Err(Error::IndexOutOfRange { index: k, n: feed.n() });
    }
    let mut c = RatMatrix::identity(feed.n());
    for i in 0..feed.n() {
        if i != k {
            c.set(i, k, rat(-feed.eps(k, i)));
        }
    }
    AffineElement::linear(c)
}

/// `c_{i,σ(i)} = 1`.
pub fn permutation_element(sigma: &Permutation) -> AffineElement {
    let n = sigma.len();
    let mut c = RatMatrix::zeros(n, n);
    for i in 0..n {
        c.set(i, sigma.apply(i), rat(1));
    }
    AffineElement {
        c,
        t: vec![BigRational::zero(); n],
    }
}

/// Where a factor of a residual word comes from. Seed indices refer to the
/// mutation path of the relation, starting at seed 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    MutationC { seed: usize, index: usize, inverse: bool },
    Gaussian { seed: usize, index: usize, inverse: bool },
    Permutation { cycles: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::MutationC { seed, index, inverse } => {
                write!(f, "C(seed{seed},{})", index + 1)?;
                if *inverse {
                    f.write_str("^-1")?;
                }
                Ok(())
            }
            Provenance::Gaussian { seed, index, inverse } => {
                write!(f, "G(seed{seed},{})", index + 1)?;
                if *inverse {
                    f.write_str("^-1")?;
                }
                Ok(())
            }
            Provenance::Permutation { cycles } => write!(f, "P{cycles}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFactor {
    pub provenance: Provenance,
    pub element: AffineElement,
}

/// Relations whose residual words can be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// `μ_k ∘ μ_k = id`.
    A1,
    Rank2(Rank2Type),
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::A1,
        Relation::Rank2(Rank2Type::A1xA1),
        Relation::Rank2(Rank2Type::A2),
        Relation::Rank2(Rank2Type::B2),
        Relation::Rank2(Rank2Type::G2),
    ];

    pub fn parse(s: &str) -> Option<Relation> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Some(Relation::A1),
            "a1xa1" | "a1a1" => Some(Relation::Rank2(Rank2Type::A1xA1)),
            "a2" => Some(Relation::Rank2(Rank2Type::A2)),
            "b2" => Some(Relation::Rank2(Rank2Type::B2)),
            "g2" => Some(Relation::Rank2(Rank2Type::G2)),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::A1 => f.write_str("A1"),
            Relation::Rank2(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualWord {
    pub relation: Relation,
    pub factors: Vec<WordFactor>,
}

impl ResidualWord {
    /// Product of the factors in order.
    pub fn compose(&self, n: usize) -> Result<AffineElement> {
        self.factors
            .iter()
            .try_fold(AffineElement::identity(n), |acc, f| acc.compose(&f.element))
    }
}

/// Seeds along alternating mutations `i, j, i, …` from `feed`.
fn path(feed: &Feed, first: usize, second: usize, len: usize) -> Result<Vec<Feed>> {
    let mut out = vec![feed.clone()];
    for s in 0..len {
        let k = if s % 2 == 0 { first } else { second };
        let next = out.last().unwrap().mutate(k)?;
        out.push(next);
    }
    Ok(out)
}

fn c_factor(seeds: &[(usize, &Feed)], seed: usize, index: usize, inverse: bool) -> Result<WordFactor> {
    let feed = seeds
        .iter()
        .find(|(s, _)| *s == seed)
        .map(|(_, f)| *f)
        .expect("seed on path");
    let el = mutation_c_matrix(feed, index)?;
    Ok(WordFactor {
        provenance: Provenance::MutationC { seed, index, inverse },
        element: if inverse { el.inverse() } else { el },
    })
}

fn check_hypothesis(feed: &Feed, i: usize, j: usize, t: Rank2Type) -> Result<()> {
    match feed.rank2_classify(i, j)? {
        Some(found) if found == t => Ok(()),
        other => Err(Error::Hypothesis(format!(
            "pair ({}, {}) has type {:?}, expected {t}",
            i + 1,
            j + 1,
            other.map(|x| x.to_string())
        ))),
    }
}

/// Which Gaussian factors sit between the two halves of a rank-2 word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WordVariant {
    /// Read off by matching the quantum dilogarithm arguments of the two
    /// sides; depends on the sign of `ε_ij`.
    Derived,
    /// A single `G(seed0, i)` regardless of type or sign.
    Literal,
}

fn gaussian_block(t: Rank2Type, feed: &Feed, i: usize, j: usize, variant: WordVariant) -> Result<Vec<WordFactor>> {
    if variant == WordVariant::Literal {
        return Ok(vec![gaussian(feed, i, false)?]);
    }
    let positive = feed.eps(i, j) > 0;
    Ok(match (t, positive) {
        (Rank2Type::A1xA1, _) => vec![],
        (Rank2Type::A2 | Rank2Type::B2, true) => vec![gaussian(feed, i, false)?],
        (Rank2Type::G2, true) => vec![gaussian(feed, i, false)?, gaussian(feed, j, false)?],
        (Rank2Type::A2, false) => vec![],
        (Rank2Type::B2, false) => vec![gaussian(feed, j, true)?],
        (Rank2Type::G2, false) => vec![gaussian(feed, i, true)?, gaussian(feed, j, true)?],
    })
}

/// Residual word of a relation. For `A1` only `i` is used, as the mutation
/// index.
pub fn build_residual_word(relation: Relation, feed: &Feed, i: usize, j: usize) -> Result<ResidualWord> {
    build_residual_word_variant(relation, feed, i, j, WordVariant::Derived)
}

/// The same words with a single `G(seed0, i)` in every rank-2 case.
pub fn build_literal_residual_word(relation: Relation, feed: &Feed, i: usize, j: usize) -> Result<ResidualWord> {
    build_residual_word_variant(relation, feed, i, j, WordVariant::Literal)
}

pub fn build_residual_word_variant(
    relation: Relation,
    feed: &Feed,
    i: usize,
    j: usize,
    variant: WordVariant,
) -> Result<ResidualWord> {
    let n = feed.n();
    let factors = match relation {
        Relation::A1 => {
            let primed = feed.mutate(i)?;
            let seeds = [(0, feed), (1, &primed)];
            vec![
                gaussian(feed, i, false)?,
                c_factor(&seeds, 0, i, false)?,
                c_factor(&seeds, 1, i, false)?,
            ]
        }
        Relation::Rank2(t) => {
            check_hypothesis(feed, i, j, t)?;
            // left side mutates i, j, i, …; right side j, i, j, … with its
            // seeds numbered after the left-hand ones
            let lhs = path(feed, i, j, 4)?;
            let rhs = path(feed, j, i, 3)?;
            let rhs_base = if t == Rank2Type::G2 { 5 } else { 4 };
            let mut seeds: Vec<(usize, &Feed)> = lhs.iter().enumerate().take(rhs_base).collect();
            for (s, f) in rhs.iter().enumerate().skip(1) {
                seeds.push((rhs_base + s - 1, f));
            }
            match t {
                Rank2Type::A1xA1 => {
                    // lhs: seed0 -i-> seed1 -j-> seed2 ; rhs: seed0 -j-> seed3 -i-> seed2
                    let s3 = feed.mutate(j)?;
                    let seeds = [(0, feed), (1, &lhs[1]), (3, &s3)];
                    vec![
                        c_factor(&seeds, 1, j, true)?,
                        c_factor(&seeds, 0, i, true)?,
                        c_factor(&seeds, 0, j, false)?,
                        c_factor(&seeds, 3, i, false)?,
                    ]
                }
                Rank2Type::A2 => {
                    let sigma = Permutation::transposition(n, i, j)?;
                    let mut w = vec![
                        WordFactor {
                            provenance: Provenance::Permutation { cycles: sigma.to_string() },
                            element: permutation_element(&sigma),
                        },
                        c_factor(&seeds, 4, i, true)?,
                        c_factor(&seeds, 0, j, true)?,
                    ];
                    w.extend(gaussian_block(t, feed, i, j, variant)?);
                    w.extend([
                        c_factor(&seeds, 0, i, false)?,
                        c_factor(&seeds, 1, j, false)?,
                        c_factor(&seeds, 2, i, false)?,
                    ]);
                    w
                }
                Rank2Type::B2 => {
                    let mut w = vec![
                        c_factor(&seeds, 5, j, true)?,
                        c_factor(&seeds, 4, i, true)?,
                        c_factor(&seeds, 0, j, true)?,
                    ];
                    w.extend(gaussian_block(t, feed, i, j, variant)?);
                    w.extend([
                        c_factor(&seeds, 0, i, false)?,
                        c_factor(&seeds, 1, j, false)?,
                        c_factor(&seeds, 2, i, false)?,
                    ]);
                    w
                }
                Rank2Type::G2 => {
                    let mut w = vec![
                        c_factor(&seeds, 7, i, true)?,
                        c_factor(&seeds, 6, j, true)?,
                        c_factor(&seeds, 5, i, true)?,
                        c_factor(&seeds, 0, j, true)?,
                    ];
                    w.extend(gaussian_block(t, feed, i, j, variant)?);
                    w.extend([
                        c_factor(&seeds, 0, i, false)?,
                        c_factor(&seeds, 1, j, false)?,
                        c_factor(&seeds, 2, i, false)?,
                        c_factor(&seeds, 3, j, false)?,
                    ]);
                    w
                }
            }
        }
    };
    Ok(ResidualWord { relation, factors })
}

fn gaussian(feed: &Feed, i: usize, inverse: bool) -> Result<WordFactor> {
    let g = gaussian_matrix(feed, i)?;
    Ok(WordFactor {
        provenance: Provenance::Gaussian { seed: 0, index: i, inverse },
        element: if inverse { g.inverse() } else { g },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseReport {
    pub relation: Relation,
    pub feed: Feed,
    pub i: usize,
    pub j: usize,
    pub word: ResidualWord,
    pub composed: AffineElement,
    /// The composed element is the identity, so the phase constant is 1.
    pub identity: bool,
}

pub fn verify_phase(relation: Relation, feed: &Feed, i: usize, j: usize) -> Result<PhaseReport> {
    verify_phase_variant(relation, feed, i, j, WordVariant::Derived)
}

pub fn verify_phase_variant(
    relation: Relation,
    feed: &Feed,
    i: usize,
    j: usize,
    variant: WordVariant,
) -> Result<PhaseReport> {
    let word = build_residual_word_variant(relation, feed, i, j, variant)?;
    let composed = word.compose(feed.n())?;
    Ok(PhaseReport {
        relation,
        feed: feed.clone(),
        i,
        j,
        identity: composed.is_identity(),
        word,
        composed,
    })
}

/// Place a rank-2 block at positions `(i, j)` of a feed of rank `outer_n`.
/// `couplings` lists `(a, b, ε_ab)` for further entries; the transposed
/// entry is filled in from the symmetrizer and must come out integral.
pub fn embed_rank2(
    outer_n: usize,
    i: usize,
    j: usize,
    block: &Feed,
    d: &[u64],
    couplings: &[(usize, usize, i64)],
) -> Result<Feed> {
    if block.n() != 2 || d.len() != outer_n || i >= outer_n || j >= outer_n || i == j {
        return Err(Error::Dimension("bad embedding shape".into()));
    }
    if d[i] != block.d_at(0) || d[j] != block.d_at(1) {
        return Err(Error::InvalidSymmetrizer(
            "outer symmetrizer must agree with the block".into(),
        ));
    }
    let mut eps = vec![vec![0i64; outer_n]; outer_n];
    eps[i][j] = block.eps(0, 1);
    eps[j][i] = block.eps(1, 0);
    for &(a, b, v) in couplings {
        if a >= outer_n || b >= outer_n || a == b {
            return Err(Error::IndexOutOfRange { index: a.max(b), n: outer_n });
        }
        // ε_ba = -ε_ab d_a / d_b
        let num = -(v as i128) * d[a] as i128;
        if num % d[b] as i128 != 0 {
            return Err(Error::NotSkewSymmetrizable(format!(
                "coupling ({}, {}) = {v} has no integral partner",
                a + 1,
                b + 1
            )));
        }
        eps[a][b] = v;
        eps[b][a] = (num / d[b] as i128) as i64;
    }
    Feed::new(eps, d.to_vec())
}

type Coupling = (usize, usize, i64);

/// One case of the built-in phase suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteCase {
    pub label: String,
    pub relation: Relation,
    pub feed: Feed,
    pub i: usize,
    pub j: usize,
}

/// `[[0, sign·p], [-sign, 0]]` with `d = (1, p)`, or the zero feed for `A1×A1`.
pub fn minimal_feed(t: Rank2Type, sign: i64) -> Feed {
    let p = t.p();
    match t {
        Rank2Type::A1xA1 => Feed::zero(2),
        _ => Feed::new(vec![vec![0, sign * p], vec![-sign, 0]], vec![1, p as u64])
            .expect("minimal rank-2 feeds are skew-symmetrizable"),
    }
}

/// For every relation: minimal feeds of both orientations, a rank-3
/// embedding and a rank-5 embedding with couplings.
pub fn builtin_suite() -> Vec<SuiteCase> {
    let mut out = Vec::new();
    let mut push = |label: &str, relation, feed: Result<Feed>, i, j| {
        out.push(SuiteCase {
            label: label.to_string(),
            relation,
            feed: feed.expect("built-in feeds are valid"),
            i,
            j,
        });
    };
    let a2 = minimal_feed(Rank2Type::A2, 1);
    push("minimal", Relation::A1, Ok(Feed::zero(1)), 0, 0);
    push("minimal a2", Relation::A1, Ok(a2.clone()), 0, 0);
    push("n=3", Relation::A1, embed_rank2(3, 0, 1, &a2, &[1, 1, 1], &[(0, 2, 2)]), 2, 0);
    push(
        "n=5",
        Relation::A1,
        embed_rank2(5, 0, 1, &minimal_feed(Rank2Type::G2, 1), &[1, 3, 1, 1, 1], &[(1, 2, 1), (3, 4, 2)]),
        1,
        0,
    );
    for t in Rank2Type::ALL {
        let rel = Relation::Rank2(t);
        let p = t.p();
        let dj = p.max(1) as u64;
        push("minimal +", rel, Ok(minimal_feed(t, 1)), 0, 1);
        if t != Rank2Type::A1xA1 {
            push("minimal -", rel, Ok(minimal_feed(t, -1)), 0, 1);
        }
        let (c3, c5): (&[Coupling], &[Coupling]) = match t {
            Rank2Type::A1xA1 => (&[(0, 1, 1), (1, 2, 1)], &[(0, 2, -1), (1, 3, 2), (2, 4, 1)]),
            _ => (&[(0, 1, 1), (1, 2, -1)], &[(1, 2, 1), (3, 4, 2), (0, 3, -1)]),
        };
        // rank 3: block at (2, 0), negative orientation
        push(
            "n=3",
            rel,
            embed_rank2(3, 2, 0, &minimal_feed(t, -1), &[dj, 1, 1], c3),
            2,
            0,
        );
        push(
            "n=5",
            rel,
            embed_rank2(5, 0, 1, &minimal_feed(t, 1), &[1, dj, 1, 1, 1], c5),
            0,
            1,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64(rows).unwrap()
    }

    fn a2() -> Feed {
        Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn compose_examples() {
        let c = AffineElement::new(m(&[vec![1, 1], vec![0, 1]]), vec![rat(2), rat(-1)]).unwrap();
        assert_eq!(AffineElement::identity(2).compose(&c).unwrap(), c);
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
        let shift = AffineElement::new(RatMatrix::identity(2), vec![rat(1), rat(3)]).unwrap();
        let lin = AffineElement::linear(m(&[vec![0, 1], vec![1, 0]])).unwrap();
        let prod = shift.compose(&lin).unwrap();
        assert_eq!(prod.matrix(), lin.matrix());
        assert_eq!(prod.translation(), &[rat(3), rat(1)]);
        assert!(AffineElement::linear(m(&[vec![2, 0], vec![0, 1]])).is_err());
    }

    #[test]
    fn action_is_a_homomorphism() {
        let a = AffineElement::new(m(&[vec![1, 2], vec![0, 1]]), vec![rat(1), rat(0)]).unwrap();
        let b = AffineElement::new(m(&[vec![0, 1], vec![-1, 0]]), vec![rat(0), rat(5)]).unwrap();
        let x = vec![rat(3), rat(-2)];
        // S_a S_b f(x) = f(x·a·b...) in the operator order
        assert_eq!(a.compose(&b).unwrap().act(&x), b.act(&a.act(&x)));
    }

    #[test]
    fn c_matrix_examples() {
        let c = mutation_c_matrix(&a2(), 0).unwrap();
        assert_eq!(c.matrix(), &m(&[vec![-1, 0], vec![0, 1]]));
        let c2 = mutation_c_matrix(&a2().mutate(0).unwrap(), 0).unwrap();
        assert_eq!(c2.matrix(), &m(&[vec![-1, 0], vec![1, 1]]));
        assert!(c2.compose(&c2).unwrap().is_identity());
        let z = mutation_c_matrix(&Feed::zero(3), 1).unwrap();
        assert_eq!(z.matrix(), &m(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_matrix(&a2(), 0).unwrap().matrix(), &m(&[vec![1, 0], vec![-1, 1]]));
        let b2 = Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap();
        assert_eq!(gaussian_matrix(&b2, 0).unwrap().matrix(), &m(&[vec![1, 0], vec![-2, 1]]));
        assert!(gaussian_matrix(&Feed::zero(2), 0).unwrap().is_identity());
    }

    #[test]
    fn permutation_examples() {
        assert!(permutation_element(&Permutation::identity(3)).is_identity());
        let s = Permutation::transposition(2, 0, 1).unwrap();
        assert_eq!(permutation_element(&s).matrix(), &m(&[vec![0, 1], vec![1, 0]]));
        let c = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let prod = permutation_element(&c).compose(&permutation_element(&c.inverse())).unwrap();
        assert!(prod.is_identity());
    }

    #[test]
    fn a1_word_on_a2() {
        let r = verify_phase(Relation::A1, &a2(), 0, 0).unwrap();
        assert_eq!(r.word.factors.len(), 3);
        assert!(r.identity);
    }

    fn minimal(t: Rank2Type, sign: i64) -> Feed {
        minimal_feed(t, sign)
    }

    #[test]
    fn builtin_suite_is_identity() {
        let suite = builtin_suite();
        for rel in Relation::ALL {
            assert!(suite.iter().filter(|c| c.relation == rel).count() >= 3, "{rel}");
        }
        for c in &suite {
            let r = verify_phase(c.relation, &c.feed, c.i, c.j).unwrap();
            assert!(r.identity, "{} {}: {}", c.relation, c.label, r.composed);
        }
        assert!(suite.iter().any(|c| c.feed.n() == 5 && c.relation == Relation::Rank2(Rank2Type::G2)));
    }

    #[test]
    fn rank2_minimal_feeds() {
        for t in Rank2Type::ALL {
            for sign in [1, -1] {
                let f = minimal(t, sign);
                let r = verify_phase(Relation::Rank2(t), &f, 0, 1).unwrap();
                assert!(r.identity, "{t} sign {sign}: {}", r.composed);
            }
        }
    }

    #[test]
    fn literal_words() {
        let expect = |t, sign, rows: Option<&[Vec<i64>]>| {
            let r = verify_phase_variant(Relation::Rank2(t), &minimal(t, sign), 0, 1, WordVariant::Literal).unwrap();
            match rows {
                None => assert!(r.identity, "{t} {sign}"),
                Some(rows) => {
                    assert_eq!(r.composed.matrix(), &m(rows), "{t} {sign}");
                    assert!(r.composed.translation().iter().all(Zero::is_zero));
                }
            }
        };
        expect(Rank2Type::A2, 1, None);
        expect(Rank2Type::B2, 1, None);
        expect(Rank2Type::G2, 1, Some(&[vec![1, -1], vec![0, 1]]));
        expect(Rank2Type::A2, -1, Some(&[vec![1, 1], vec![0, 1]]));
        expect(Rank2Type::B2, -1, Some(&[vec![1, 1], vec![-2, -1]]));
        expect(Rank2Type::G2, -1, Some(&[vec![-2, -1], vec![-3, -2]]));
    }

    #[test]
    fn g2_gaussian_order_matters() {
        let f = minimal(Rank2Type::G2, 1);
        let mut w = build_residual_word(Relation::Rank2(Rank2Type::G2), &f, 0, 1).unwrap();
        let names: Vec<String> = w.factors.iter().map(|x| x.provenance.to_string()).collect();
        assert_eq!(names[4], "G(seed0,1)");
        assert_eq!(names[5], "G(seed0,2)");
        w.factors.swap(4, 5);
        assert!(!w.compose(2).unwrap().is_identity());
    }

    #[test]
    fn a1_relation_any_sign() {
        for f in [a2(), minimal(Rank2Type::B2, -1), minimal(Rank2Type::G2, 1)] {
            for k in 0..2 {
                assert!(verify_phase(Relation::A1, &f, k, k).unwrap().identity);
            }
        }
    }

    #[test]
    fn embedded_pairs() {
        let g2 = minimal(Rank2Type::G2, 1);
        let f = embed_rank2(5, 0, 1, &g2, &[1, 3, 1, 1, 1], &[(1, 2, 1), (3, 4, 2), (0, 3, -1)]).unwrap();
        assert!(verify_phase(Relation::Rank2(Rank2Type::G2), &f, 0, 1).unwrap().identity);
        let b2 = minimal(Rank2Type::B2, -1);
        let f = embed_rank2(3, 2, 0, &b2, &[2, 1, 1], &[(1, 0, 2), (1, 2, -1)]).unwrap();
        assert!(verify_phase(Relation::Rank2(Rank2Type::B2), &f, 2, 0).unwrap().identity);
        let f = embed_rank2(3, 1, 2, &a2(), &[1, 1, 1], &[(0, 1, 2), (0, 2, -1)]).unwrap();
        assert!(verify_phase(Relation::Rank2(Rank2Type::A2), &f, 1, 2).unwrap().identity);
        let f = embed_rank2(3, 0, 2, &Feed::zero(2), &[1, 1, 1], &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(verify_phase(Relation::Rank2(Rank2Type::A1xA1), &f, 0, 2).unwrap().identity);
    }

    #[test]
    fn hypothesis_violation() {
        assert!(matches!(
            build_residual_word(Relation::Rank2(Rank2Type::B2), &a2(), 0, 1),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn embedding_examples() {
        let f = embed_rank2(2, 0, 1, &a2(), &[1, 1], &[]).unwrap();
        assert_eq!(f, a2());
        let f = embed_rank2(3, 0, 1, &a2(), &[1, 1, 1], &[(0, 2, 1)]).unwrap();
        assert_eq!(f.eps(2, 0), -1);
        let g2 = Feed::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).unwrap();
        let f = embed_rank2(5, 0, 1, &g2, &[1, 3, 1, 1, 1], &[(1, 2, 1), (3, 4, 2)]).unwrap();
        assert_eq!(f.eps(2, 1), -3);
        assert!(embed_rank2(3, 0, 1, &g2, &[1, 3, 1], &[(2, 1, 1)]).is_err());
    }
}
