//! Coevolving social network model.
//!
//! Agents hold a continuous opinion and directed friendships. Each time step
//! diffuses opinions over cluster-weighted friendships, amplifies opinions that
//! fall inside an amplification domain, forms and breaks friendships at random
//! with cluster-dependent odds, and then re-detects clusters with
//! Girvan–Newman edge-betweenness removal.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! front end and the parallel replicate runner live in the `coevonet` crate.
//!
//! * [`graph`]: network state and its elementary queries.
//! * [`clustering`]: community detection and cluster quality.
//! * [`metrics`]: per-cluster observables and per-step averages.
//! * [`dynamics`]: opinion and connection updates, one model step.
//! * [`engine`]: multi-step, multi-replicate runs and parameter sweeps.
//! * [`stats`]: regression trend tests, Student's t tail, percent error.
//! * [`synth`]: planted-partition generator for initial networks.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod clustering;
pub mod dynamics;
pub mod engine;
mod error;
pub mod graph;
pub mod metrics;
pub mod stats;
pub mod synth;

pub use clustering::{best_partition, Cluster, ClusteringOptions, Partition};
pub use dynamics::{AmpDomain, ConnectionMode, ModelParams, OpenInterval, SimState};
pub use engine::{MeanRow, Parameter, RunResult, SimulationConfig};
pub use error::Error;
pub use graph::{Bounds, DynamicNetwork, NodeId, UndirectedGraph};
pub use metrics::{ClusterAverages, MetricsRow};
pub use stats::{Direction, TrendTest};
pub use synth::SynthSpec;

/// Deterministic random stream used by every stochastic operation.
pub type RandomStream = rand_chacha::ChaCha8Rng;
