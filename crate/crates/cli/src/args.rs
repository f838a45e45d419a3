use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_pairings::fredholm::suite::SuiteKind;

#[derive(Debug, Parser)]
#[command(name = "dirac-pairings", version, about = "Exact Dirac-index, elliptic and Euler-Poincaré pairings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Evaluate batches on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Print the elapsed wall time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args, Clone)]
pub struct GroupArgs {
    /// Preset name (sl2R, su21, sp4R).
    #[arg(long, conflicts_with = "datum")]
    pub group: Option<String>,
    /// Root datum JSON file.
    #[arg(long)]
    pub datum: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots, chambers, ρ vectors and the spinor weights of a datum.
    #[command(name = "root-data")]
    RootData {
        #[command(subcommand)]
        action: RootDataAction,
    },
    /// Dirac indices of discrete series and finite-dimensional modules.
    #[command(name = "dirac-index")]
    DiracIndex {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Explicit Harish-Chandra parameter, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        /// Chamber index for --chi; defaults to the chamber containing χ.
        #[arg(long, requires = "chi")]
        chamber: Option<usize>,
        /// Treat --chi as a limit of discrete series.
        #[arg(long, requires = "chi")]
        limit: bool,
    },
    /// Gram matrix of a pairing.
    Pair {
        #[arg(value_enum)]
        kind: PairKind,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Randomized Fredholm-pair suites.
    Fredholm {
        #[command(subcommand)]
        action: FredholmAction,
    },
    /// Explicit matrix checks over a lab algebra.
    Lab {
        #[arg(value_enum)]
        action: LabAction,
        /// Lab algebra preset (sl2R, su21).
        #[arg(long, default_value = "sl2R")]
        group: String,
        /// Largest n of the module family F_0..F_n (sl2R only).
        #[arg(long, default_value_t = 6)]
        max: usize,
        /// Additional module given as JSON; may be repeated.
        #[arg(long = "module")]
        modules: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RootDataAction {
    Show {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum FredholmAction {
    Check {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per suite; defaults to each suite's standard count.
        #[arg(long)]
        instances: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PairKind {
    Dirac,
    Elliptic,
    Ep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabAction {
    Identities,
    Conjecture,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ParamArgs {
    /// Discrete series with χ = n·ρ, n in the range, over every chamber with the reference compact system.
    #[arg(long, value_parser = parse_range)]
    pub ds: Option<RangeInclusive<i64>>,
    /// Finite-dimensional modules with highest weight n·ρ, n in the range.
    #[arg(long, value_parser = parse_range)]
    pub findim: Option<RangeInclusive<i64>>,
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

pub fn parse_suites(s: &str) -> Result<Vec<SuiteKind>, String> {
    if s == "all" {
        return Ok(SuiteKind::ALL.to_vec());
    }
    s.split(',').map(|t| t.trim().parse::<SuiteKind>().map_err(|e| e.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3"), Ok(1..=3));
        assert_eq!(parse_range("0..=4"), Ok(0..=4));
        assert_eq!(parse_range("2"), Ok(2..=2));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("a..1").is_err());
    }

    #[test]
    fn suites() {
        assert_eq!(parse_suites("all").unwrap().len(), SuiteKind::ALL.len());
        assert_eq!(parse_suites("euler,definition").unwrap(), vec![SuiteKind::Euler, SuiteKind::Definition]);
        assert!(parse_suites("nope").is_err());
    }
}
