use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qfc_core::fueter::{Domain, DEFAULT_MASK_THRESHOLD, DEFAULT_TOL};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every subcommand. All are optional so that a `--config`
/// file can supply them; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Function-definition file (`name = expression` per line).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sampling box: x1min,x1max,y1min,y1max,x2min,x2max,y2min,y2max.
    #[arg(long = "box", value_delimiter = ',', num_args = 8, allow_negative_numbers = true)]
    pub bounds: Option<Vec<f64>>,
    /// Grid points per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Points with norm_sq(f) below this are masked.
    #[arg(long)]
    pub mask: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the keys above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    #[serde(rename = "box")]
    bounds: Option<Vec<f64>>,
    grid: Option<usize>,
    tol: Option<f64>,
    mask: Option<f64>,
    format: Option<Format>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(skip)]
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(rename = "box")]
    pub bounds: [f64; 8],
    pub grid: usize,
    pub tol: f64,
    pub mask: f64,
    pub format: Format,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Whether `tol` came from a flag or the config file.
    #[serde(skip)]
    pub tol_explicit: bool,
}

impl RunConfig {
    pub fn resolve(command: &'static str, args: &CommonArgs, default_grid: usize) -> Result<Self, String> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let bounds = match args.bounds.clone().or(file.bounds) {
            Some(v) => <[f64; 8]>::try_from(v.as_slice()).map_err(|_| "box needs exactly 8 numbers".to_string())?,
            None => Domain::default().bounds(),
        };
        let cfg = RunConfig {
            command,
            input: args.input.clone().or(file.input),
            bounds,
            grid: args.grid.or(file.grid).unwrap_or(default_grid),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            mask: args.mask.or(file.mask).unwrap_or(DEFAULT_MASK_THRESHOLD),
            format: args.format.or(file.format).unwrap_or(Format::Text),
            seed: args.seed.or(file.seed).unwrap_or(0),
            out: args.out.clone().or(file.out),
            tol_explicit: args.tol.or(file.tol).is_some(),
        };
        if cfg.grid < 2 {
            return Err("grid must be at least 2".into());
        }
        if !(cfg.tol > 0.0) {
            return Err("tol must be positive".into());
        }
        if !(cfg.mask >= 0.0) {
            return Err("mask must be non-negative".into());
        }
        cfg.domain()?;
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<Domain, String> {
        Domain::from_bounds(self.bounds, self.mask).map_err(|e| e.to_string())
    }
}
