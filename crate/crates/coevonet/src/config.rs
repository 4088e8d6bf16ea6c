//! JSON run configurations and generator specs.
//!
//! A run config is one flat object carrying every model and run field:
//!
//! ```json
//! {
//!   "w": 5, "k_amp": 1.05, "c": 0.245, "alpha": 0.10, "beta": 0.15,
//!   "amp_domain": [[-1, 0], [1.5, 2]], "bounds": [-2, 2],
//!   "horizon": 50, "replicates": 50, "master_seed": 2026
//! }
//! ```
//!
//! Missing fields are errors. Only `recluster_interval` (1), `metrics_every`
//! (1), `connection_mode` (`"single_draw"`) and `max_single_cluster_fraction`
//! (0.9) have defaults. Unknown fields are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use coevonet_core::{
    AmpDomain, Bounds, ClusteringOptions, ConnectionMode, ModelParams, OpenInterval,
    SimulationConfig, SynthSpec,
};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Syntax {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(#[from] coevonet_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    SingleDraw,
    Independent,
}

impl From<ModeName> for ConnectionMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::SingleDraw => ConnectionMode::SingleDraw,
            ModeName::Independent => ConnectionMode::Independent,
        }
    }
}

impl From<ConnectionMode> for ModeName {
    fn from(m: ConnectionMode) -> Self {
        match m {
            ConnectionMode::SingleDraw => ModeName::SingleDraw,
            ConnectionMode::Independent => ModeName::Independent,
        }
    }
}

fn one() -> usize {
    1
}

fn default_fraction() -> f64 {
    ClusteringOptions::default().max_single_cluster_fraction
}

/// On-disk form of [`SimulationConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub w: f64,
    pub k_amp: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub amp_domain: Vec<(f64, f64)>,
    pub bounds: (f64, f64),
    pub horizon: usize,
    pub replicates: usize,
    pub master_seed: u64,
    #[serde(default = "one")]
    pub recluster_interval: usize,
    #[serde(default = "one")]
    pub metrics_every: usize,
    #[serde(default)]
    pub connection_mode: ModeName,
    #[serde(default = "default_fraction")]
    pub max_single_cluster_fraction: f64,
}

impl RunConfig {
    /// Validated engine configuration.
    pub fn to_simulation(&self) -> Result<SimulationConfig, coevonet_core::Error> {
        let bounds = Bounds::new(self.bounds.0, self.bounds.1)?;
        let params = ModelParams {
            w: self.w,
            k_amp: self.k_amp,
            c: self.c,
            alpha: self.alpha,
            beta: self.beta,
            amp_domain: AmpDomain(
                self.amp_domain
                    .iter()
                    .map(|&(lo, hi)| OpenInterval { lo, hi })
                    .collect(),
            ),
            bounds,
            connection_mode: self.connection_mode.into(),
        };
        let cfg = SimulationConfig {
            recluster_interval: self.recluster_interval,
            metrics_every: self.metrics_every,
            clustering: ClusteringOptions {
                max_single_cluster_fraction: self.max_single_cluster_fraction,
            },
            ..SimulationConfig::new(params, self.horizon, self.replicates, self.master_seed)
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_simulation(cfg: &SimulationConfig) -> Self {
        let p = &cfg.params;
        RunConfig {
            w: p.w,
            k_amp: p.k_amp,
            c: p.c,
            alpha: p.alpha,
            beta: p.beta,
            amp_domain: p.amp_domain.0.iter().map(|iv| (iv.lo, iv.hi)).collect(),
            bounds: (p.bounds.lo, p.bounds.hi),
            horizon: cfg.horizon,
            replicates: cfg.replicates,
            master_seed: cfg.master_seed,
            recluster_interval: cfg.recluster_interval,
            metrics_every: cfg.metrics_every,
            connection_mode: p.connection_mode.into(),
            max_single_cluster_fraction: cfg.clustering.max_single_cluster_fraction,
        }
    }
}

/// On-disk form of [`SynthSpec`]. Only `bounds` may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub opinion_counts: Vec<(i32, usize)>,
    pub cluster_sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub reciprocity_in: f64,
    pub reciprocity_out: f64,
    pub homophily: f64,
    #[serde(default = "default_bounds")]
    pub bounds: (f64, f64),
}

fn default_bounds() -> (f64, f64) {
    let b = Bounds::default();
    (b.lo, b.hi)
}

impl SynthConfig {
    pub fn to_spec(&self) -> Result<SynthSpec, coevonet_core::Error> {
        let spec = SynthSpec {
            opinion_counts: self.opinion_counts.clone(),
            cluster_sizes: self.cluster_sizes.clone(),
            p_in: self.p_in,
            p_out: self.p_out,
            reciprocity_in: self.reciprocity_in,
            reciprocity_out: self.reciprocity_out,
            homophily: self.homophily,
            bounds: Bounds::new(self.bounds.0, self.bounds.1)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &SynthSpec) -> Self {
        SynthConfig {
            opinion_counts: spec.opinion_counts.clone(),
            cluster_sizes: spec.cluster_sizes.clone(),
            p_in: spec.p_in,
            p_out: spec.p_out,
            reciprocity_in: spec.reciprocity_in,
            reciprocity_out: spec.reciprocity_out,
            homophily: spec.homophily,
            bounds: (spec.bounds.lo, spec.bounds.hi),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Syntax {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_run_config(path: &Path) -> Result<RunConfig, ConfigError> {
    read_json(path)
}

pub fn load_synth_config(path: &Path) -> Result<SynthConfig, ConfigError> {
    read_json(path)
}
