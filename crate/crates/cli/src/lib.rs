//! `pxmap`: tables and verification runs over the px+1 maps.

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod output;

pub use output::{Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "pxmap", version, about = "Exact computations for the px+1 maps")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Odd parameter(s) p, comma separated.
    #[arg(long = "p", global = true, value_delimiter = ',')]
    pub p: Vec<u64>,

    #[arg(long, global = true)]
    pub kappa: Option<u32>,

    /// Fourier depth: characters with |t|_2 <= 2^M.
    #[arg(long, short = 'M', global = true)]
    pub depth: Option<u32>,

    /// Seed range `lo..hi`, inclusive.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: Option<(i64, i64)>,

    #[arg(long = "t-max", global = true)]
    pub t_max: Option<u64>,

    /// p-adic precision N (residues mod p^N).
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// chi_p at naturals (with chi_p(B(t))) and at rationals.
    Chi {
        /// Naturals, or rationals such as 1/3. Pass negative rationals
        /// through `--rational`.
        #[arg(allow_negative_numbers = true)]
        targets: Vec<String>,

        /// Evaluate at a rational 2-adic integer `a` or `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        rational: Vec<String>,
    },
    /// t, #1(t), lambda(t), chi_p(t) and chi_p(B(t)) for t = 0..=t_max.
    Table,
    /// Cycle search and the two-way periodic point check.
    Cycles {
        #[arg(long = "max-steps", default_value_t = 10_000)]
        max_steps: u64,

        #[arg(long = "abs-bound", default_value_t = 1_000_000_000)]
        abs_bound: u64,
    },
    /// Fourier coefficients of omega_{p,kappa}, L1 sums and the periodic point bound.
    Fourier {
        /// Coefficient CSV path.
        #[arg(long)]
        out: Option<PathBuf>,

        /// Riemann sum resolution for the Haar comparison.
        #[arg(long = "haar-digits", default_value_t = 20)]
        haar_digits: u32,

        /// Number of sampled rationals for the reconstruction error.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Solutions of |2^a - p^b| = 1.
    Catalan {
        #[arg(long = "max-exp", default_value_t = 64)]
        max_exp: u32,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or unmet hypotheses; exit code 2.
    Usage(String),
    /// Some check failed; exit code 1.
    Verification(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<pxmap::Error> for CliError {
    fn from(e: pxmap::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Validated run settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    pub kappa: Option<u32>,
    pub precision: Option<u32>,
    pub t_max: Option<u64>,
    pub range: Option<(i64, i64)>,
    pub depth: Option<u32>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_opts(opts: &GlobalOpts, default_p: &[u64]) -> Result<Self, CliError> {
        let primes = if opts.p.is_empty() {
            default_p.to_vec()
        } else {
            opts.p.clone()
        };
        if let Some(&bad) = primes.iter().find(|&&p| p < 3 || p % 2 == 0) {
            return Err(CliError::Usage(format!("p = {bad} must be odd and at least 3")));
        }
        Ok(Self {
            primes,
            kappa: opts.kappa,
            precision: opts.precision,
            t_max: opts.t_max,
            range: opts.range,
            depth: opts.depth,
            format: opts.format,
            seed: opts.seed,
        })
    }

    /// The first requested p.
    pub fn p(&self) -> u64 {
        self.primes[0]
    }
}

/// Runs a parsed command line, writing tables to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.global.workers {
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => {
            let mut buf = Vec::new();
            let result = with_workers(n, || commands::dispatch(cli, &mut buf));
            out.write_all(&buf)?;
            result
        }
        None => commands::dispatch(cli, out),
    }
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(n: usize, f: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_n: usize, f: impl FnOnce() -> Result<T, CliError>) -> Result<T, CliError> {
    f()
}

/// Parses `args` (program name first) and runs, returning the exit code.
pub fn run_args<I, S>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match run(&cli, out) {
            Ok(()) => 0,
            Err(e) => e.exit_code(),
        },
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}
