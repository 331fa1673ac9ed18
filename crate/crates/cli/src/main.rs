use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use randfact_cli::bench::{parse_size, BenchConfig};
use randfact_cli::kind::MatrixKind;
use randfact_cli::run::{Algorithm, Params};
use randfact_cli::{cmd_bench, cmd_factorize, cmd_gen, io, thread_budget, to_json, CliError, Result, THREADS_ENV};

#[derive(Parser)]
#[command(name = "randfact", version, about = "Randomized matrix factorizations with diagnostic reports")]
struct Cli {
    /// Single worker thread; output is bitwise reproducible.
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Factors {
    /// Target rank.
    #[arg(long)]
    k: Option<usize>,
    /// Oversampling.
    #[arg(long)]
    p: Option<usize>,
    /// Power iterations.
    #[arg(long)]
    q: Option<usize>,
    /// Block size.
    #[arg(long)]
    b: Option<usize>,
    /// Error tolerance for the adaptive algorithms.
    #[arg(long)]
    eps: Option<f64>,
    /// Certification window for `adaptive`.
    #[arg(long)]
    r: Option<usize>,
}

impl Factors {
    fn params(&self, seed: u64) -> Params {
        Params { k: self.k, p: self.p, q: self.q, b: self.b, eps: self.eps, r: self.r, seed }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test matrix in Matrix Market array format.
    Gen {
        /// Family, e.g. gaussian, fast-decay(0.5), flat-tail(10,0.1), exact-rank(5), psd-flat-tail, kahan.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        rows: usize,
        /// Defaults to `--rows`.
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Factorize a Matrix Market or CSV file and emit a JSON report.
    Factorize {
        /// rsvd, spevd, spsvd, nystrom, id, fastid, cur, adaptive, blocked, hqrrp or randutv.
        #[arg(long)]
        algo: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        factors: Factors,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sweep sizes and seeds for a list of algorithms.
    Bench {
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',')]
        algos: Vec<String>,
        #[arg(long)]
        kind: String,
        /// Comma-separated sizes, N or RxC.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[command(flatten)]
        factors: Factors,
        #[arg(long)]
        report: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    let deterministic = cli.deterministic;
    let threads = thread_budget(deterministic, std::env::var(THREADS_ENV).ok().as_deref())?;
    match cli.command {
        Command::Gen { kind, rows, cols, seed, out } => cmd_gen(&kind, rows, cols.unwrap_or(rows), seed, &out),
        Command::Factorize { algo, input, factors, seed, report } => {
            let rep = cmd_factorize(&algo, &input, &factors.params(seed), deterministic)?;
            let json = to_json(&rep);
            match report {
                Some(path) => io::write_atomic(&path, json.as_bytes()),
                None => {
                    print!("{json}");
                    Ok(())
                }
            }
        }
        Command::Bench { algos, kind, sizes, seeds, factors, report } => {
            let algorithms = algos
                .iter()
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(str::parse::<Algorithm>)
                .collect::<Result<Vec<_>>>()?;
            let cfg = BenchConfig {
                algorithms,
                kind: MatrixKind::parse(&kind)?,
                sizes: sizes.iter().map(|s| parse_size(s)).collect::<Result<_>>()?,
                seeds,
                params: factors.params(0),
                threads,
            };
            cmd_bench(&cfg, &report).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Parse(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
