//! File formats, replicate-parallel runner and command line front end for
//! the coevolving network model in `coevonet_core`.

pub mod cli;
pub mod config;
pub mod manifest;
pub mod parallel;
pub mod series;
pub mod wave;
