//! Argument parsing, configuration merge, thread setup and exit codes.

use crate::job::{parse_function, Command, JobSpec, MatrixEncoding, MatrixKind, OutputFormat, ReproduceArgs, SymbolInput};
use crate::run::run;
use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use toeplitz_trace::indices::ExampleId;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "TOEPLITZ_TRACE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InputError = 1,
    Disagreement = 2,
}

#[derive(Debug, Parser)]
#[command(name = "toeplitz-trace", version, about = "Indices, spectral shift functions and trace formulas for Toeplitz operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<CliCommand>,
    /// Symbol: an expression such as "z^2*(1+z)^1.5", inline JSON, or a JSON file.
    #[arg(long, global = true)]
    pub symbol: Option<String>,
    /// Truncation degree for infinite-series symbols.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Starting node count of circle quadratures.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Section size of the matrix routes.
    #[arg(long, global = true)]
    pub size: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON job file; flags given on the command line override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Agreement tolerance, overriding the command's default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Fredholm index and the commutator trace check.
    Index,
    /// Witten index by every available route.
    Witten,
    /// Tr(phi(T*T) - phi(TT*)) by matrix and integral routes.
    Trace {
        /// power:P, exp:S, resolvent:L, poly:c0,c1,... or JSON.
        #[arg(long)]
        phi: String,
    },
    /// Heat trace Tr(exp(-sT*T) - exp(-sTT*)) against its integral.
    Heat {
        #[arg(long)]
        s: f64,
    },
    /// Spectral shift function on a grid by each route.
    Ssf {
        /// Number of evenly spaced points.
        #[arg(long, default_value_t = 16)]
        grid: usize,
        /// Explicit comma-separated points instead of the even grid.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
    },
    /// Besov-space membership diagnostic for analytic symbols.
    Besov {
        #[arg(long)]
        p: f64,
        /// Derivative order; defaults to ceil(2/p).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Four-way check of Krein's trace formula.
    KreinCheck {
        #[arg(long, default_value = "power:2")]
        phi: String,
    },
    /// Recompute a worked example and compare with its closed form.
    Reproduce {
        /// rational, anyv, gamma, elliptic_small_a, elliptic_large_a,
        /// shift_sum_even, shift_sum_odd or helton_howe_monomials.
        id: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Weight symbol of helton_howe_monomials.
        #[arg(long)]
        h: Option<String>,
    },
    /// Write a section matrix as CSV or raw little-endian binary.
    DumpMatrix {
        #[arg(long, value_enum, default_value_t = MatrixKind::A)]
        matrix: MatrixKind,
        #[arg(long, value_enum, default_value_t = MatrixEncoding::Csv)]
        encoding: MatrixEncoding,
    },
    /// Seeded randomized property suites.
    Suites {
        /// Trials per suite, overriding the defaults.
        #[arg(long)]
        trials: Option<usize>,
    },
}

impl CliCommand {
    fn to_command(&self) -> Result<Command> {
        Ok(match self {
            CliCommand::Index => Command::Index,
            CliCommand::Witten => Command::Witten,
            CliCommand::Trace { phi } => Command::Trace { function: parse_function(phi)? },
            CliCommand::Heat { s } => Command::Heat { s: *s },
            CliCommand::Ssf { grid, points } => Command::Ssf {
                grid: *grid,
                points: points.clone(),
            },
            CliCommand::Besov { p, n } => Command::Besov { p: *p, n: *n },
            CliCommand::KreinCheck { phi } => Command::KreinCheck { function: parse_function(phi)? },
            CliCommand::Reproduce { id, p, a, n, m, alpha, h } => Command::Reproduce {
                id: id.parse::<ExampleId>()?,
                args: ReproduceArgs {
                    p: *p,
                    a: *a,
                    n: *n,
                    m: *m,
                    alpha: *alpha,
                    h: h.clone(),
                },
            },
            CliCommand::DumpMatrix { matrix, encoding } => Command::DumpMatrix {
                matrix: *matrix,
                encoding: *encoding,
            },
            CliCommand::Suites { trials } => Command::Suites { trials: *trials },
        })
    }
}

/// Builds the job from the configuration file, if any, and the flags.
pub fn job_from_cli(cli: &Cli) -> Result<JobSpec> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(serde_json::from_str::<JobSpec>(&text).with_context(|| format!("parsing job file {}", path.display()))?)
        }
        None => None,
    };
    let mut job = match (&cli.command, base) {
        (Some(c), Some(mut base)) => {
            base.command = c.to_command()?;
            base
        }
        (Some(c), None) => JobSpec::new(c.to_command()?),
        (None, Some(base)) => base,
        (None, None) => return Err(anyhow!("no command given; see --help")),
    };
    if let Some(s) = &cli.symbol {
        job.symbol = Some(SymbolInput::from_argument(s)?);
    }
    if let Some(d) = cli.degree {
        job.degree = d;
    }
    if let Some(n) = cli.nodes {
        job.settings.circle_nodes = n;
    }
    if let Some(n) = cli.size {
        job.size = n;
    }
    if let Some(f) = cli.format {
        job.format = f;
    }
    if let Some(o) = &cli.out {
        job.out = Some(o.clone());
    }
    if let Some(s) = cli.seed {
        job.seed = s;
    }
    if let Some(t) = cli.tol {
        job.tolerance = Some(t);
    }
    job.validate()?;
    Ok(job)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| anyhow!("configuring {threads} threads: {e}"))
}

fn execute(cli: &Cli) -> Result<ExitStatus> {
    configure_threads()?;
    let job = job_from_cli(cli)?;
    let artifact = run(&job)?;
    match &job.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut out = BufWriter::new(file);
            artifact.write(&job, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            artifact.write(&job, &mut out)?;
            out.flush()?;
        }
    }
    Ok(match artifact.agreement() {
        Some(false) => ExitStatus::Disagreement,
        _ => ExitStatus::Success,
    })
}

/// Parses arguments, runs the job and returns the exit status: 0 on
/// success, 1 on input or computation errors, 2 when routes disagree.
pub fn main_with_args<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::InputError
            } else {
                ExitStatus::Success
            };
        }
    };
    match execute(&cli) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitStatus::InputError
        }
    }
}
