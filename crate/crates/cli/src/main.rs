//! `syzlab`: Koszul cohomology of Veronese embeddings from the command line.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use syzlab_core::acceptance::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "syzlab", version, about = "Exact Koszul cohomology of Veronese embeddings, certificates and predictors")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Coefficient field: an odd prime below 2^31, `GF(p)`, or `Q`.
    #[arg(long, global = true, default_value = "32003")]
    pub field: String,
    /// Compute at several primes and report disagreements (overrides --field).
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Vec<u32>,
    /// Directory of the result cache.
    #[arg(long, global = true, env = "SYZLAB_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Cap on the estimated nonzeros of one differential.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Diagram)]
    pub format: Format,
    /// Seed for every randomised computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Diagram,
    Csv,
    Json,
}

/// `(n, b, d)` of a Veronese instance.
#[derive(Args, Clone, Copy, Debug)]
pub struct Instance {
    /// Dimension of the projective space.
    #[arg(short = 'n', long)]
    pub n: usize,
    /// Twist `O(b)`.
    #[arg(short = 'b', long, allow_hyphen_values = true, default_value_t = 0)]
    pub b: i64,
    /// Degree of the embedding.
    #[arg(short = 'd', long)]
    pub d: u32,
}

#[derive(Subcommand)]
enum Command {
    /// One cell k_{p,q}(n, b; d).
    Kpq {
        #[command(flatten)]
        inst: Instance,
        #[arg(short = 'p', long)]
        p: usize,
        #[arg(short = 'q', long, allow_hyphen_values = true)]
        q: i64,
    },
    /// The full Betti table, resuming from cached cells.
    Table {
        #[command(flatten)]
        inst: Instance,
        /// Skip the comparison with the predicted support.
        #[arg(long)]
        no_watch: bool,
    },
    /// Build and verify a monomial cocycle certificate.
    Certify {
        #[command(flatten)]
        inst: Instance,
        #[arg(short = 'q', long)]
        q: i64,
        /// Non-divisor annihilators added to the wedge.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        /// Target monomial such as `x0^2*x1^3` (default z_1^{d-1}..z_q^{d-1} z_0^{b+q}).
        #[arg(long)]
        target: Option<String>,
        /// Also test non-bounding by exact elimination.
        #[arg(long)]
        linear: bool,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predicted support of the Betti table, with the reason for every cell.
    Predict {
        #[command(flatten)]
        inst: Instance,
    },
    /// Closed-form ranges and thresholds.
    #[command(subcommand)]
    Range(commands::RangeCmd),
    /// Curve formulas: k_{p,1}, the Gaussian normalisation and support maps.
    #[command(subcommand)]
    Curve(commands::CurveCmd),
    /// Two-row Boij-Soderberg tools.
    #[command(subcommand)]
    Bs(commands::BsCmd),
    /// Cross-check one cell against the dense brute-force computation.
    Oracle {
        #[command(flatten)]
        inst: Instance,
        #[arg(short = 'p', long)]
        p: usize,
        #[arg(short = 'q', long, allow_hyphen_values = true)]
        q: i64,
        /// Build the complex over the full polynomial ring instead of the reduction.
        #[arg(long)]
        unreduced: bool,
    },
    /// Run the acceptance checks.
    Selftest {
        /// Only these criteria (1-11).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        // read by the rayon global pool on first use
        std::env::set_var("RAYON_NUM_THREADS", j.to_string());
    }
    let g = &cli.global;
    let result = match cli.command {
        Command::Kpq { inst, p, q } => commands::kpq(g, inst, p, q),
        Command::Table { inst, no_watch } => commands::table(g, inst, !no_watch),
        Command::Certify {
            inst,
            q,
            extra,
            target,
            linear,
            out,
        } => commands::certify(g, inst, q, extra, target.as_deref(), linear, out.as_deref()),
        Command::Predict { inst } => commands::predict(g, inst),
        Command::Range(c) => commands::range(g, c),
        Command::Curve(c) => commands::curve(g, c),
        Command::Bs(c) => commands::bs(g, c),
        Command::Oracle { inst, p, q, unreduced } => commands::oracle(g, inst, p, q, unreduced),
        Command::Selftest { only } => commands::selftest(g, &only),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(partial) = &f.partial {
                print!("{partial}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.kind.code())
        }
    }
}
