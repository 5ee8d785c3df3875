//! Command-line front end for the `logjac` engine.
//!
//! Exit codes: 0 success with all checks passing, 1 a check failed,
//! 2 usage or contract error.

pub mod cache;
pub mod commands;
pub mod instance;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logjac::{FieldKind, GeneratorVariant};

pub use cache::{Cache, CacheEntry};
pub use instance::{AnyInstance, Coefficients, InstanceSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
    #[error(transparent)]
    Engine(#[from] logjac::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Engine(logjac::Error::Calibration(_) | logjac::Error::PrimeExhausted(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "logjac", version, about = "Exact Jacobian rings of open hypersurface pairs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Instance file (JSON).
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    /// Generic instance `n,d,e` when no instance file is given.
    #[arg(long, global = true, value_parser = parse_nde)]
    pub nde: Option<(usize, u32, u32)>,
    /// Q, Qi or Fp:<prime>; overrides the instance file.
    #[arg(long, global = true)]
    pub field: Option<FieldKind>,
    /// Generator variant; overrides the instance file.
    #[arg(long, global = true)]
    pub variant: Option<GeneratorVariant>,
    /// Coefficient seed for generic instances, prime-draw seed for cross-checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here instead of printing a table.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub degree_cap: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quotient pieces, pairings, Hodge numbers and calibration.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Criterion predicates.
    #[command(subcommand)]
    Criteria(CriteriaCommand),
    /// Vanishing claims for a Fano pair with `K_X + mY = 0`.
    Vanishing {
        #[arg(long, default_value_t = 3)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Whether the normal-bundle duality is symmetric.
    Duality {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// The Fermat cubic threefold certificate.
    #[command(subcommand)]
    Fermat(FermatCommand),
    /// Independent checks of an instance.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum RingCommand {
    /// `dim B_q(l)` for every `q` and a range of `l` (default: the duality window).
    Dims {
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        l: Option<(i64, i64)>,
    },
    /// Duality pairings; every window key unless `--q` and `--l` are given.
    Pairing {
        #[arg(long, allow_negative_numbers = true)]
        q: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        l: Option<i64>,
    },
    /// `dim B_q(d+e-n-1+l)` for `q = 0..n-1`.
    Hodge {
        #[arg(long, default_value_t = 0)]
        l: i64,
    },
    /// Measures every generator variant against the oracle targets.
    Calibrate {
        /// Seeds for generic instances; defaults to the instance seed.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionKind {
    Hodgefil,
    Consmac,
    Loci,
}

#[derive(Debug, Subcommand)]
pub enum CriteriaCommand {
    /// One report per grid cell. Ranges are `a:b`, inclusive, or a single value.
    Scan {
        #[arg(long, value_enum)]
        criterion: CriterionKind,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        n: (i64, i64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        d: (i64, i64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        e: (i64, i64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0:1")]
        p: (i64, i64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0")]
        l: (i64, i64),
        #[arg(long = "p2", value_parser = parse_range, allow_hyphen_values = true, default_value = "0")]
        p2: (i64, i64),
        #[arg(long = "l2", value_parser = parse_range, allow_hyphen_values = true, default_value = "0")]
        l2: (i64, i64),
    },
}

#[derive(Debug, Subcommand)]
pub enum FermatCommand {
    /// Recomputes every step of the worked example.
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Rational dims against three prime reductions, plus the closed-form
    /// oracles that apply.
    Compare,
}

fn parse_nde(s: &str) -> Result<(usize, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [n, d, e] => Ok((
            n.trim().parse().map_err(|_| format!("bad n in `{s}`"))?,
            d.trim().parse().map_err(|_| format!("bad d in `{s}`"))?,
            e.trim().parse().map_err(|_| format!("bad e in `{s}`"))?,
        )),
        _ => Err(format!("expected n,d,e, got `{s}`")),
    }
}

pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected `a:b` or an integer, got `{s}`");
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

/// Parses `args` (without the program name) and runs; returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(std::iter::once("logjac".into()).chain(args.into_iter().map(Into::into))) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
