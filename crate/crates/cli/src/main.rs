use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use jtcomp::SweepAxis;
use jtcomp_cli::validate::{self, Fault};
use jtcomp_cli::{cmd_run, cmd_sweep, RunConfig};

/// JT-CoMP clustering Monte Carlo simulator.
#[derive(Parser)]
#[command(name = "jtcomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write a CSV row per scheme.
    Run(Common),
    /// Run one experiment per value of a parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// lambda_B, lambda_U or R_min.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
    },
    /// Run the statistical and constraint self-checks.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML config file; missing keys take the reference defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set lambda_B=2e-4` or `--set radio.noise_dbm=-90`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the drop loop.
    #[arg(long)]
    workers: Option<usize>,
    /// Master seed; shorthand for `--set master_seed=N`.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut overrides = self.set.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("master_seed={seed}"));
        }
        RunConfig::load(self.config.as_deref(), &overrides)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(c) => c
            .load()
            .and_then(|cfg| cmd_run(&cfg, c.workers, c.out.as_deref())),
        Command::Sweep {
            common: c,
            axis,
            values,
        } => c
            .load()
            .and_then(|cfg| cmd_sweep(&cfg, axis, &values, c.workers, c.out.as_deref())),
        Command::Validate { seed, inject_fault } => {
            let checks = validate::run_all(seed, inject_fault);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            return if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
