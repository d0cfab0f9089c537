use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use mch_core::{Frame, QuadratureSpec, ReflectionCoefficient, ReflectionTable};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "mch",
    version,
    about = "Long-time asymptotics of the mCH equation and a PDE cross-check"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate C1..C4 along a sweep of rays.
    Coeffs(CoeffsArgs),
    /// Evaluate the leading asymptotics on a (ray, t) grid.
    Evaluate(EvaluateArgs),
    /// Run the pseudospectral solver and write snapshots.
    Simulate(SimulateArgs),
    /// Compare simulation snapshots with the predictions.
    Compare(CompareArgs),
    /// Quick internal consistency checks.
    Selftest(SelftestArgs),
}

/// `a:b:step` or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        let values = match parts.as_slice() {
            [v] => vec![num(v)?],
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                    return Err(format!("range `{s}` needs a <= b and a positive step"));
                }
                let n = ((b - a) / step + 1e-9).floor() as usize;
                // Rounding keeps the printed rays free of accumulated drift.
                (0..=n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect()
            }
            _ => return Err(format!("expected `a:b:step` or a number, got `{s}`")),
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("non-finite value in `{s}`"));
        }
        Ok(Sweep { values })
    }
}

/// Comma-separated list of positive times.
#[derive(Debug, Clone, PartialEq)]
pub struct Times(pub Vec<f64>);

impl FromStr for Times {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() || v.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(format!("times must be positive and finite, got `{s}`"));
        }
        Ok(Times(v))
    }
}

/// `A,a,b` for the Gaussian model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams(pub f64, pub f64, pub f64);

impl FromStr for ModelParams {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        match v.as_slice() {
            [a, w, b] => Ok(ModelParams(*a, *w, *b)),
            _ => Err(format!("expected `A,a,b`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReflectionArgs {
    /// Gaussian model `r = -A exp(-a w²) exp(i b w)`, `w = μ - 1/μ`.
    #[arg(long = "r-model", value_name = "A,a,b", conflicts_with = "r_table")]
    pub r_model: Option<ModelParams>,
    /// Table of `mu re im` rows on `μ >= 1`.
    #[arg(long = "r-table", value_name = "PATH")]
    pub r_table: Option<PathBuf>,
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long = "tol-quad", value_name = "X", default_value_t = 1e-10)]
    pub tol_quad: f64,
}

impl ReflectionArgs {
    pub fn reflection(&self) -> CliResult<ReflectionCoefficient> {
        if let Some(path) = &self.r_table {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            return Ok(ReflectionTable::parse(&text)?.into());
        }
        match self.r_model {
            Some(ModelParams(a, w, b)) => Ok(ReflectionCoefficient::model(a, w, b)?),
            None => Ok(ReflectionCoefficient::default()),
        }
    }

    pub fn quadrature(&self) -> CliResult<QuadratureSpec> {
        let spec = QuadratureSpec::default().with_rel_tol(self.tol_quad);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    /// Rays `x/t` as `a:b:step` or a single value.
    #[arg(long, value_name = "a:b:step", allow_hyphen_values = true)]
    pub zeta: Sweep,
    #[arg(long, default_value = "u")]
    pub frame: Frame,
    /// Rays closer than this to a sector boundary are reported as boundary rows.
    #[arg(long, default_value_t = 1e-3)]
    pub margin: f64,
    #[command(flatten)]
    pub reflection: ReflectionArgs,
    /// Output directory; the table goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_name = "a:b:step", allow_hyphen_values = true)]
    pub zeta: Sweep,
    #[arg(long, value_name = "t1,t2,...")]
    pub t: Times,
    #[arg(long, default_value = "u")]
    pub frame: Frame,
    #[arg(long, default_value_t = 1e-3)]
    pub margin: f64,
    #[command(flatten)]
    pub reflection: ReflectionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Snapshot times; the run ends at the largest.
    #[arg(long, value_name = "t1,t2,...", default_value = "100,200,400")]
    pub t: Times,
    #[arg(long, default_value_t = 0.05)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 5.0)]
    pub width: f64,
    #[arg(long = "half-length", default_value_t = 1024.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 1 << 14)]
    pub modes: usize,
    #[arg(long, default_value_t = 5e-3)]
    pub dt: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Directory written by `simulate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Rays `x/t` in the shifted frame.
    #[arg(
        long,
        value_name = "a:b:step",
        default_value = "0.6:1.4:0.2",
        allow_hyphen_values = true
    )]
    pub zeta: Sweep,
    /// Allowed relative error of the local wavenumber.
    #[arg(long = "tol-k", default_value_t = 0.05)]
    pub tol_k: f64,
    /// Allowed deviation of the envelope exponent from -1/2.
    #[arg(long = "tol-exponent", default_value_t = 0.1)]
    pub tol_exponent: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub reflection: ReflectionArgs,
}
