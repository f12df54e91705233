mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Failure;
use crate::config::CommonArgs;

#[derive(Debug, Parser)]
#[command(name = "qfc", version, about = "Classify quaternionic functions and check their PDE residuals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label every function of the input file.
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        /// Only this definition.
        #[arg(long)]
        function: Option<String>,
        /// Definitions used as closure witnesses (repeatable).
        #[arg(long)]
        witness: Vec<String>,
    },
    /// Evaluate one residual system on the grid.
    Residuals {
        #[command(flatten)]
        common: CommonArgs,
        /// eq1, inverse-eq1, inverse-system, real-linear-system, sum-pde,
        /// product-system, real-product, real-combined or product-rule.
        #[arg(long, default_value = "eq1")]
        system: String,
        #[arg(long)]
        function: Option<String>,
        /// Second function for two-function systems.
        #[arg(long)]
        partner: Option<String>,
    },
    /// Run the built-in verification suite.
    VerifyPaper {
        #[command(flatten)]
        common: CommonArgs,
        /// Random points per pointwise check.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Locate grid points where both components vanish.
    ZeroSet {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        function: Option<String>,
    },
    /// Estimate the order of a zero or pole.
    Order {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        function: Option<String>,
        /// x1,y1,x2,y2 of the point.
        #[arg(long, value_delimiter = ',', num_args = 4, allow_negative_numbers = true)]
        at: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "zero")]
        kind: commands::Kind,
    },
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("QFC_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| Failure::usage(format!("QFC_THREADS: not a count: {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Classify { common, function, witness } => commands::classify(&common, function.as_deref(), &witness),
        Command::Residuals { common, system, function, partner } => {
            commands::residuals(&common, &system, function.as_deref(), partner.as_deref())
        }
        Command::VerifyPaper { common, samples } => commands::verify_paper(&common, samples),
        Command::ZeroSet { common, function } => commands::zero_set(&common, function.as_deref()),
        Command::Order { common, function, at, kind } => commands::order(&common, function.as_deref(), at, kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("qfc: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
