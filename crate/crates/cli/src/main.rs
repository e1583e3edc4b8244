mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Debug, Parser)]
#[command(name = "clusterq", version, about = "Checks for quantized cluster varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a word such as "m1 p(1 2) m2" to a feed.
    Mutate {
        /// JSON file, inline JSON, or a built-in name (a2, b2, g2, ...).
        #[arg(long)]
        feed: String,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Compose residual affine words and compare with the identity.
    PhaseCheck(PhaseArgs),
    /// Compare both sides of a Ψ series identity.
    SeriesCheck(SeriesArgs),
    /// Floating-point quantum dilogarithm.
    Qdilog {
        #[command(subcommand)]
        cmd: QdilogCmd,
    },
    /// Conjugation checks for both linear representations.
    RepCheck {
        #[arg(long)]
        feed: String,
        /// 1-based mutation index; all indices when omitted.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Mutation class up to relabeling, and trivial-word search.
    Explore(ExploreArgs),
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Every relation (with --feed: every finite-type pair of that feed).
    #[arg(long)]
    all: bool,
    /// The built-in suite of feeds.
    #[arg(long)]
    builtin_suite: bool,
    /// One of a1, a1xa1, a2, b2, g2.
    #[arg(long)]
    relation: Option<String>,
    #[arg(long)]
    feed: Option<String>,
    /// 1-based pair "i,j".
    #[arg(long)]
    pair: Option<String>,
    /// Drop the last factor of every word; every verdict should flip.
    #[arg(long)]
    negative_control: bool,
    /// Use a single Gaussian in every rank-2 word.
    #[arg(long)]
    literal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Pentagon,
    /// The pentagon with `qXY` in the middle.
    PentagonQxy,
    Hexagon,
    Octagon,
    Functional,
    Conjugation,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    identity: Identity,
    /// z-order; defaults to 6, 4, 3 for pentagon, hexagon, octagon.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 60)]
    qcutoff: i64,
    /// Feed for the conjugation identity.
    #[arg(long)]
    feed: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Unitarity,
    Involutivity,
    Duality,
    Functional,
    Shifts,
    Detour,
    Ratio,
    All,
}

#[derive(Debug, Subcommand)]
enum QdilogCmd {
    /// Evaluate Φ at one point, continuing outside the strip if needed.
    Eval {
        #[arg(long, default_value_t = std::f64::consts::SQRT_2 - 1.0)]
        hbar: f64,
        /// "re,im"
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Residual tables for the functional identities.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2 - 1.0)]
        hbar: f64,
        /// Number of real sample points.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    A,
    X,
    D,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[arg(long)]
    feed: String,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Print the graph in DOT format.
    #[arg(long)]
    dot: bool,
    /// Also search for trivial words up to --max-len.
    #[arg(long)]
    trivial_words: bool,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, value_enum, default_value_t = Kind::A)]
    kind: Kind,
    /// Search points per candidate word; certification uses at least 20.
    #[arg(long, default_value_t = 3)]
    samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let result = match cli.command {
        Command::Mutate { feed, word } => commands::mutate(&feed, &word),
        Command::PhaseCheck(a) => commands::phase_check(&a),
        Command::SeriesCheck(a) => commands::series_check(&a),
        Command::Qdilog { cmd } => match cmd {
            QdilogCmd::Eval { hbar, z } => commands::qdilog_eval(hbar, &z, g.tol),
            QdilogCmd::Check { suite, hbar, samples } => commands::qdilog_check(suite, hbar, samples, g.tol),
        },
        Command::RepCheck { feed, k } => commands::rep_check(&feed, k),
        Command::Explore(a) => commands::explore(&a, g.seed),
    };
    match result {
        Ok(outcome) => {
            let text = outcome.render(g.format, g.seed);
            if let Err(e) = report::emit(&text, g.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
