//! `diskcap`: quadrature rules, transform matrices, method benchmarks,
//! existence proofs, certificate checks and plotting grids.
//!
//! Results go to files (or stdout). Failures print
//! `{"error": <kind>, "message": <text>}` on stderr and exit nonzero.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use diskcap::jacobi::EvalMethod;

use commands::GridSource;
use config::Config;

/// Machine readable failure.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        Failure { kind: kind.to_string(), message: message.into() }
    }
}

impl From<diskcap::Error> for Failure {
    fn from(e: diskcap::Error) -> Self {
        Failure::new(e.kind(), e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new("io", e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new("json", e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "diskcap", version, about = "Validated spectral transforms and existence proofs on the disk")]
struct Cli {
    /// TOML config file (default: $DISKCAP_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified Gauss–Jacobi rule as JSON.
    Quadrature {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        /// The rule has order + 1 nodes.
        #[arg(long)]
        order: usize,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward (and inverse) transform matrix as JSON.
    Mmt {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        nodes_k: Option<u32>,
        #[arg(long)]
        nodes_m: Option<u32>,
        #[arg(long)]
        order: usize,
        /// Highest degree, defaults to the order.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value = "forsythe")]
        method: EvalMethod,
        /// Also build the inverse (needs matching weights).
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forsythe against the linear system: CSV of N, method, max radius, seconds.
    Bench {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long = "N", value_delimiter = ',', default_value = "10,20,40,80")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 53)]
        bits: u32,
        /// Random evaluation points per N.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Existence proof; writes one certificate per m.
    Prove {
        /// One value or a comma separated list, e.g. `--m=-1,0,1`.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        bits: Option<u32>,
        /// `auto`, `fixture`, or a fixture file.
        #[arg(long, default_value = "auto")]
        guess: String,
        /// Certificate file, or a directory when several m are given.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from its stored bounds.
    VerifyCert { path: PathBuf },
    /// Plotting CSV `r,theta,re,im` of an approximate solution.
    Grid {
        #[arg(long, conflicts_with_all = ["fixture", "m"])]
        cert: Option<PathBuf>,
        #[arg(long, conflicts_with = "m")]
        fixture: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i32>,
        #[arg(long = "N", default_value_t = 36)]
        n: usize,
        #[arg(long, default_value = "auto")]
        guess: String,
        #[arg(long, default_value_t = 32)]
        nr: usize,
        #[arg(long, default_value_t = 64)]
        ntheta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate an initial guess fixture.
    Guess {
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = Config::load(cli.config.as_deref())?;
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Failure::new("usage", e.to_string()))?;
    }
    match cli.command {
        Command::Quadrature { k, m, order, bits, out } => commands::quadrature(&cfg, k, m, order, bits, out.as_deref()),
        Command::Mmt { k, m, nodes_k, nodes_m, order, degree, method, inverse, bits, out } => commands::mmt(
            &cfg,
            (k, m),
            (nodes_k.unwrap_or(k), nodes_m.unwrap_or(m)),
            order,
            degree,
            method,
            inverse,
            bits,
            out.as_deref(),
        ),
        Command::Bench { k, m, n, bits, trials, seed, out } => commands::bench((k, m), &n, bits, trials, seed, out.as_deref()),
        Command::Prove { m, n, bits, guess, out } => commands::prove(&cfg, &parse_list(&m)?, n, bits, &guess, out.as_deref()),
        Command::VerifyCert { path } => commands::verify(&path),
        Command::Grid { cert, fixture, m, n, guess, nr, ntheta, out } => {
            let source = match (cert, fixture, m) {
                (Some(p), _, _) => GridSource::Certificate(p),
                (_, Some(p), _) => GridSource::Fixture(p),
                (_, _, Some(m)) => GridSource::Solve { m, n, guess },
                _ => return Err(Failure::new("usage", "one of --cert, --fixture or --m is required")),
            };
            commands::grid(&cfg, source, nr, ntheta, out.as_deref())
        }
        Command::Guess { m, n, bits, out } => commands::guess(&cfg, m, n, bits, out.as_deref()),
    }
}

fn parse_list(s: &str) -> Result<Vec<i32>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|e| Failure::new("usage", format!("--m {t:?}: {e}"))))
        .collect()
}

fn report(f: &Failure) {
    eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // help and version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report(&Failure::new("usage", e.to_string().trim_end()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f);
            ExitCode::FAILURE
        }
    }
}
