//! Command-line flags and list parsing.
//!
//! List-valued flags take comma-separated values. Lag flags also accept an
//! inclusive range `lo..hi`, so `0..19` means twenty lags.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Compressed and one-bit correlation estimators: theory, simulation, evaluation"
)]
pub struct Cli {
    /// Worker threads for replicate loops (default: all cores). Results do
    /// not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic variances and losses on a grid of (a, alpha, c4, lag).
    #[command(args_override_self = true)]
    Theory(TheoryArgs),
    /// Monte-Carlo means and variances of the estimators.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Sign of the compression loss over the AR(1) coefficient.
    #[command(args_override_self = true)]
    Region(RegionArgs),
    /// Block evaluation of a recorded signal against its full-data estimate.
    #[command(args_override_self = true)]
    Blocks(BlocksArgs),
    /// One-bit sketches against float sketches of the same bit budget.
    #[command(name = "bit-budget", args_override_self = true)]
    BitBudget(BudgetArgs),
    /// Writes a synthetic AR(1) signal file.
    #[command(args_override_self = true)]
    Generate(GenerateArgs),
    /// Reruns a command from its manifest and compares output digests.
    #[command(args_override_self = true)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Theory(_) => "theory",
            Command::Simulate(_) => "simulate",
            Command::Region(_) => "region",
            Command::Blocks(_) => "blocks",
            Command::BitBudget(_) => "bit-budget",
            Command::Generate(_) => "generate",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Flat TOML file of flag values; flags on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TheoryArgs {
    #[arg(long, default_value = "ar1")]
    pub model: String,
    /// AR(1) coefficients.
    #[arg(long, default_value = "0,0.4,0.7")]
    pub a: String,
    /// Innovation coupling between x and y; 1 gives the autocorrelation.
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long, default_value = "10")]
    pub alpha: String,
    #[arg(long, default_value = "0")]
    pub c4: String,
    #[arg(long, default_value = "0..19")]
    pub lags: String,
    /// Adds exact finite-N variances for windows of this length.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value = "ar1")]
    pub model: String,
    #[arg(long, default_value = "0,0.4,0.7")]
    pub a: String,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long = "N", default_value_t = 1000)]
    pub n: usize,
    /// Sketch length; overrides --alpha.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Compression rate, giving M = floor(N / alpha).
    #[arg(long, default_value_t = 10.0)]
    pub alpha: f64,
    #[arg(long, default_value = "0..19")]
    pub lags: String,
    /// Estimator names, or `all`.
    #[arg(long, default_value = "all")]
    pub estimators: String,
    #[arg(long, default_value = "gaussian")]
    pub scheme: String,
    /// fresh-per-replicate, fixed or fresh-per-lag.
    #[arg(long, default_value = "fresh-per-replicate")]
    pub scheme_mode: String,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegionArgs {
    #[arg(long, default_value = "5,10,50")]
    pub alpha: String,
    /// Grid of AR(1) coefficients (default 0, 0.01, ..., 0.99).
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long, default_value = "0,0.5")]
    pub c4: String,
    /// Window length for the finite-N and Monte-Carlo deltas.
    #[arg(long = "N", default_value_t = 1000)]
    pub n: usize,
    /// Monte-Carlo replicates per grid point; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SignalFormat {
    /// One value per line, optional header.
    Csv,
    /// Little-endian 64-bit floats.
    Raw,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BlocksArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Second signal for a cross-correlation; defaults to the input.
    #[arg(long)]
    pub input_y: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SignalFormat::Csv)]
    pub format: SignalFormat,
    #[arg(long, default_value_t = 6)]
    pub blocks: usize,
    #[arg(long = "N", default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value = "5,10,20")]
    pub alpha: String,
    #[arg(long, default_value = "0..50")]
    pub lags: String,
    #[arg(
        long,
        default_value = "plain,quantized-sin,compressed,quantized-compressed-sin,quantized-subsampled-sin,consecutive"
    )]
    pub estimators: String,
    #[arg(long, default_value = "ternary-half")]
    pub scheme: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 0.7)]
    pub a: f64,
    #[arg(long = "N", default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = 10.0)]
    pub alpha: f64,
    /// Bits per float in the full-precision sketch.
    #[arg(long, default_value = "8,16")]
    pub f: String,
    #[arg(long, default_value = "0..19")]
    pub lags: String,
    #[arg(long, default_value = "gaussian")]
    pub scheme: String,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 0.7)]
    pub a: f64,
    /// Number of samples.
    #[arg(long = "N", default_value_t = 12500)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SignalFormat::Csv)]
    pub format: SignalFormat,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_item<T: FromStr>(flag: &str, s: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("--{flag}: cannot parse '{}'", s.trim())))
}

/// Non-empty comma-separated list.
pub fn parse_list<T: FromStr>(flag: &str, s: &str) -> Result<Vec<T>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::usage(format!("--{flag}: empty list")));
    }
    s.split(',').map(|item| parse_item(flag, item)).collect()
}

/// Comma-separated lags and inclusive ranges `lo..hi`.
pub fn parse_lags(flag: &str, s: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::usage(format!("--{flag}: empty list")));
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = parse_item(flag, lo)?;
                let hi: i64 = parse_item(flag, hi.trim_start_matches('='))?;
                if hi < lo {
                    return Err(CliError::usage(format!("--{flag}: empty range {lo}..{hi}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse_item(flag, part)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_ranges_are_inclusive() {
        assert_eq!(parse_lags("lags", "0..19").unwrap().len(), 20);
        assert_eq!(
            parse_lags("lags", "-2..1,5").unwrap(),
            vec![-2, -1, 0, 1, 5]
        );
        assert_eq!(parse_lags("lags", "0..=2").unwrap(), vec![0, 1, 2]);
        assert!(parse_lags("lags", "3..1").is_err());
        assert!(parse_lags("lags", "").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(
            parse_list::<f64>("a", "0, 0.4,0.7").unwrap(),
            vec![0.0, 0.4, 0.7]
        );
        assert!(parse_list::<f64>("a", "0,x").is_err());
        assert!(parse_list::<f64>("a", " ").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
