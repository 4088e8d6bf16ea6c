//! Multi-step, multi-replicate simulation runs and one-parameter sweeps.
//!
//! Replicate `r` draws from its own stream seeded with
//! [`replicate_seed`]`(master_seed, r)`, so results do not depend on the order
//! in which replicates execute. [`run`] executes them serially; callers that
//! want parallelism can call [`run_replicate`] per index and combine the rows
//! with [`RunResult::from_replicates`].

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;

use crate::clustering::ClusteringOptions;
use crate::dynamics::{step, ModelParams, SimState};
use crate::graph::DynamicNetwork;
use crate::metrics::{metrics_row, ClusterAverages, MetricsRow};
use crate::{Error, RandomStream};

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: ModelParams,
    /// Number of steps `T`.
    pub horizon: usize,
    pub replicates: usize,
    pub master_seed: u64,
    /// Re-cluster every this many steps.
    pub recluster_interval: usize,
    /// Record metrics every this many steps (the final step is always
    /// recorded).
    pub metrics_every: usize,
    pub clustering: ClusteringOptions,
}

impl SimulationConfig {
    pub fn new(params: ModelParams, horizon: usize, replicates: usize, master_seed: u64) -> Self {
        SimulationConfig {
            params,
            horizon,
            replicates,
            master_seed,
            recluster_interval: 1,
            metrics_every: 1,
            clustering: ClusteringOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.params.validate()?;
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        if self.recluster_interval == 0 {
            return Err(Error::InvalidConfig("recluster_interval must be >= 1".into()));
        }
        if self.metrics_every == 0 {
            return Err(Error::InvalidConfig("metrics_every must be >= 1".into()));
        }
        let frac = self.clustering.max_single_cluster_fraction;
        if !(0.0..=1.0).contains(&frac) {
            return Err(Error::InvalidConfig(format!(
                "max_single_cluster_fraction {frac} outside [0, 1]"
            )));
        }
        Ok(())
    }

    /// Steps at which metrics are recorded.
    pub fn recorded_steps(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.horizon).filter(move |&t| t % self.metrics_every == 0 || t == self.horizon)
    }
}

/// SplitMix64 output function.
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `r`: the `(r + 1)`-th output of a SplitMix64 generator
/// started at `master_seed`.
pub fn replicate_seed(master_seed: u64, replicate: usize) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    splitmix64(master_seed.wrapping_add((replicate as u64).wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Cross-replicate mean at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanRow {
    pub t: usize,
    /// Replicates whose row was defined (had at least one cluster).
    pub included: usize,
    /// Means over the included replicates; `None` if none was defined.
    pub averages: Option<ClusterAverages>,
    /// Mean cluster count over all replicates.
    pub cluster_count: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub per_replicate: Vec<Vec<MetricsRow>>,
    pub mean_series: Vec<MeanRow>,
    pub seeds: Vec<u64>,
}

impl RunResult {
    /// Combines per-replicate series (all recorded at the same steps).
    pub fn from_replicates(per_replicate: Vec<Vec<MetricsRow>>, seeds: Vec<u64>) -> Self {
        let mean_series = mean_series(&per_replicate);
        RunResult {
            per_replicate,
            mean_series,
            seeds,
        }
    }

    pub fn final_mean(&self) -> &MeanRow {
        self.mean_series.last().expect("run records at least t = 0")
    }
}

fn mean_series(per_replicate: &[Vec<MetricsRow>]) -> Vec<MeanRow> {
    let Some(first) = per_replicate.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|idx| {
            let mut included = 0usize;
            let mut count_sum = 0.0;
            let mut acc = ClusterAverages {
                opinion: 0.0,
                spread: 0.0,
                connectivity: 0.0,
                size: 0.0,
            };
            for rows in per_replicate {
                let row = &rows[idx];
                count_sum += row.cluster_count as f64;
                if let Some(a) = row.averages {
                    included += 1;
                    acc.opinion += a.opinion;
                    acc.spread += a.spread;
                    acc.connectivity += a.connectivity;
                    acc.size += a.size;
                }
            }
            let k = included as f64;
            MeanRow {
                t: first[idx].t,
                included,
                averages: (included > 0).then(|| ClusterAverages {
                    opinion: acc.opinion / k,
                    spread: acc.spread / k,
                    connectivity: acc.connectivity / k,
                    size: acc.size / k,
                }),
                cluster_count: count_sum / per_replicate.len() as f64,
            }
        })
        .collect()
}

/// Runs replicate `replicate` and returns its recorded metric rows.
pub fn run_replicate(
    initial: &DynamicNetwork,
    cfg: &SimulationConfig,
    replicate: usize,
) -> Result<Vec<MetricsRow>, Error> {
    let seed = replicate_seed(cfg.master_seed, replicate);
    let mut rng = RandomStream::seed_from_u64(seed);
    let mut state = SimState::initialize(initial, &cfg.params, &cfg.clustering)?;
    let mut rows = Vec::new();
    let record = |t: usize| t % cfg.metrics_every == 0 || t == cfg.horizon;
    if record(0) {
        rows.push(metrics_row(&state.net, &state.partition, 0));
    }
    for t in 1..=cfg.horizon {
        let recluster = t % cfg.recluster_interval == 0;
        step(&mut state, &cfg.params, &cfg.clustering, recluster, &mut rng)?;
        if record(t) {
            rows.push(metrics_row(&state.net, &state.partition, t));
        }
    }
    Ok(rows)
}

/// Runs every replicate serially.
pub fn run(initial: &DynamicNetwork, cfg: &SimulationConfig) -> Result<RunResult, Error> {
    cfg.validate()?;
    let per_replicate = (0..cfg.replicates)
        .map(|r| run_replicate(initial, cfg, r))
        .collect::<Result<Vec<_>, _>>()?;
    let seeds = (0..cfg.replicates)
        .map(|r| replicate_seed(cfg.master_seed, r))
        .collect();
    Ok(RunResult::from_replicates(per_replicate, seeds))
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    W,
    KAmp,
    C,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::W => "w",
            Parameter::KAmp => "k_amp",
            Parameter::C => "c",
        }
    }

    /// Accepts `w`, `k`, `k_amp` and `c`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "w" => Some(Parameter::W),
            "k" | "k_amp" => Some(Parameter::KAmp),
            "c" => Some(Parameter::C),
            _ => None,
        }
    }

    /// Copy of `base` with this parameter set to `value`, validated.
    pub fn apply(self, base: &ModelParams, value: f64) -> Result<ModelParams, Error> {
        let mut p = base.clone();
        match self {
            Parameter::W => p.w = value,
            Parameter::KAmp => p.k_amp = value,
            Parameter::C => p.c = value,
        }
        p.validate().map(|_| p)
    }
}

/// Configurations of a one-parameter sweep, all sharing `base`'s seed.
/// Fails on the first out-of-range value before anything runs.
pub fn sweep_configs(
    base: &SimulationConfig,
    vary: Parameter,
    values: &[f64],
) -> Result<Vec<SimulationConfig>, Error> {
    values
        .iter()
        .map(|&v| {
            Ok(SimulationConfig {
                params: vary.apply(&base.params, v)?,
                ..base.clone()
            })
        })
        .collect()
}

/// One full run per value, serially.
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
