//! Library side of the `jtcomp` command: configuration, CSV output and the
//! self-validation battery.

pub mod config;
pub mod output;
pub mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use jtcomp::montecarlo::{run_experiment, sweep};
use jtcomp::{SimParams, SweepAxis};

pub use config::RunConfig;
use output::{write_csv, Block};

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => bail!("--workers must be at least 1"),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
    }
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn echo(p: &SimParams) -> Result<String> {
    RunConfig::canonical(p).to_toml()
}

/// One experiment at the configured parameters; one CSV row per scheme.
pub fn cmd_run(cfg: &RunConfig, workers: Option<usize>, out: Option<&Path>) -> Result<()> {
    let p = cfg.to_params()?;
    let result = with_workers(workers, || run_experiment(&p))??;
    let blocks = [Block {
        axis: None,
        result: &result,
    }];
    write_csv(open_out(out)?, &echo(&p)?, &blocks, p.master_seed)
}

/// One experiment per value of `axis`; one CSV row per (value, scheme).
pub fn cmd_sweep(
    cfg: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    workers: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    let p = cfg.to_params()?;
    for &v in values {
        let mut q = p.clone();
        axis.apply(&mut q, v);
        q.validate()
            .with_context(|| format!("{axis} = {v} is not a valid setting"))?;
    }
    let points = with_workers(workers, || sweep(&p, axis, values))??;
    let blocks: Vec<Block<'_>> = points
        .iter()
        .map(|pt| Block {
            axis: Some((axis.as_str(), pt.value)),
            result: &pt.result,
        })
        .collect();
    write_csv(open_out(out)?, &echo(&p)?, &blocks, p.master_seed)
}
