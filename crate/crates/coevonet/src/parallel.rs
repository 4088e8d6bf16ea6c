//! Replicate-parallel runs. Results are identical to the serial engine.

use coevonet_core::engine::{self, replicate_seed, run_replicate, sweep_configs};
use coevonet_core::{DynamicNetwork, Error, Parameter, RunResult, SimulationConfig};
use rayon::prelude::*;

/// Runs all replicates on the current rayon pool.
pub fn run(initial: &DynamicNetwork, cfg: &SimulationConfig) -> Result<RunResult, Error> {
    cfg.validate()?;
    let per_replicate = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| run_replicate(initial, cfg, r))
        .collect::<Result<Vec<_>, _>>()?;
    let seeds = (0..cfg.replicates)
        .map(|r| replicate_seed(cfg.master_seed, r))
        .collect();
    Ok(RunResult::from_replicates(per_replicate, seeds))
}

/// One run per value; values are validated before anything runs.
pub fn sweep(
    initial: &DynamicNetwork,
    base: &SimulationConfig,
    vary: Parameter,
    values: &[f64],
) -> Result<Vec<(f64, RunResult)>, Error> {
    let configs = sweep_configs(base, vary, values)?;
    values
        .iter()
        .zip(configs)
        .map(|(&v, cfg)| run(initial, &cfg).map(|r| (v, r)))
        .collect()
}

/// Serial reference, re-exported for callers comparing both paths.
pub use engine::run as run_serial;
