use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toprec_core::analysis::DEFAULT_BETA_GRID;
use toprec_core::curve::BUILTIN_NAMES;
use toprec_core::ScalarMode;

use crate::error::CliError;

/// Default output directory when neither `--out` nor this variable is set.
pub const OUT_DIR_ENV: &str = "TOPREC_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "toprec-out";

const DEFAULT_CHI_MAX: usize = 3;
const DEFAULT_ANALYZE_G_MAX: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "toprec", version, about = "Topological recursion tables, growth-bound checks and asymptotics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the ω_{g,n} table and, with --g-max, the free energies F_g.
    Compute(RunArgs),
    /// Check the growth bounds on the computed table.
    Verify(RunArgs),
    /// Fit the growth of F_g and estimate the Borel radius.
    Analyze(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Builtin curve: airy, cubic or cubic-linear.
    #[arg(long, conflicts_with = "spec")]
    pub curve: Option<String>,
    /// Curve-spec file (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// CSV of (g, value) pairs, analyze only.
    #[arg(long, conflicts_with_all = ["curve", "spec"])]
    pub input: Option<PathBuf>,
    /// Largest 2g − 2 + n in the table.
    #[arg(long)]
    pub chi_max: Option<usize>,
    /// Largest genus for F_g.
    #[arg(long)]
    pub g_max: Option<usize>,
    /// exact or float:<bits>; defaults to the spec's mode, else exact.
    #[arg(long)]
    pub mode: Option<ScalarMode>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    pub out: PathBuf,
    /// Comma-separated growth exponents to scan.
    #[arg(long, value_delimiter = ',')]
    pub beta_grid: Option<Vec<f64>>,
    /// Random sample tuples per (g, n) for the ω bound.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Truncation order for lowering builtin curves.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Recompute with truncation +4 and require identical results.
    #[arg(long)]
    pub recheck: bool,
    /// Replace one C_{g,n} entry, as `g,n,p/q`.
    #[arg(long, hide = true, value_name = "G,N,VALUE")]
    pub debug_cgn_override: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Compute,
    Verify,
    Analyze,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveSource {
    Builtin(String),
    Spec(PathBuf),
    Csv(PathBuf),
}

/// Fully resolved run parameters; its JSON form is what the config hash
/// covers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub source: CurveSource,
    pub chi_max: Option<usize>,
    pub g_max: Option<usize>,
    /// `None` until the spec file has been read.
    pub mode: Option<String>,
    pub format: Format,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub samples: usize,
    pub seed: u64,
    pub beta_grid: Vec<f64>,
    pub trunc: Option<usize>,
    pub recheck: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cgn_override: Option<(usize, usize, String)>,
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> Result<Self, CliError> {
        let (kind, a) = match cmd {
            Command::Compute(a) => (CommandKind::Compute, a),
            Command::Verify(a) => (CommandKind::Verify, a),
            Command::Analyze(a) => (CommandKind::Analyze, a),
        };
        let source = match (&a.curve, &a.spec, &a.input) {
            (Some(name), None, None) => {
                if !BUILTIN_NAMES.contains(&name.as_str()) {
                    return Err(CliError::Config(format!("unknown builtin curve `{name}`; expected one of {}", BUILTIN_NAMES.join(", "))));
                }
                CurveSource::Builtin(name.clone())
            }
            (None, Some(p), None) => CurveSource::Spec(p.clone()),
            (None, None, Some(p)) if kind == CommandKind::Analyze => CurveSource::Csv(p.clone()),
            (None, None, Some(_)) => return Err(CliError::Config("--input is only accepted by analyze".into())),
            _ => return Err(CliError::Config("give exactly one of --curve or --spec".into())),
        };
        let chi_max = match kind {
            CommandKind::Analyze => None,
            _ => Some(a.chi_max.unwrap_or(DEFAULT_CHI_MAX)),
        };
        if chi_max == Some(0) {
            return Err(CliError::Config("--chi-max must be at least 1".into()));
        }
        let g_max = match kind {
            CommandKind::Analyze => Some(a.g_max.unwrap_or(DEFAULT_ANALYZE_G_MAX)),
            _ => a.g_max,
        };
        if let Some(g) = g_max {
            if g < 2 && !matches!(source, CurveSource::Csv(_)) {
                return Err(CliError::Config("--g-max must be at least 2".into()));
            }
        }
        let beta_grid = a.beta_grid.clone().unwrap_or_else(|| DEFAULT_BETA_GRID.to_vec());
        if beta_grid.is_empty() || beta_grid.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(CliError::Config("--beta-grid needs positive finite values".into()));
        }
        let cgn_override = a.debug_cgn_override.as_deref().map(parse_override).transpose()?;
        Ok(RunConfig {
            command: kind,
            source,
            chi_max,
            g_max,
            mode: a.mode.map(|m| m.to_string()),
            format: a.format,
            out_dir: a.out,
            samples: a.samples,
            seed: a.seed,
            beta_grid,
            trunc: a.trunc,
            recheck: a.recheck,
            cgn_override,
        })
    }
}

fn parse_override(s: &str) -> Result<(usize, usize, String), CliError> {
    let bad = || CliError::Config(format!("--debug-cgn-override expects g,n,p/q, got `{s}`"));
    let mut it = s.splitn(3, ',');
    let g = it.next().and_then(|v| v.trim().parse().ok()).ok_or_else(bad)?;
    let n = it.next().and_then(|v| v.trim().parse().ok()).ok_or_else(bad)?;
    let v = it.next().map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).ok_or_else(bad)?;
    Ok((g, n, v))
}
