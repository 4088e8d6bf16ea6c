use alloc::string::String;

/// Errors raised by the model crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("node {node} out of range for network of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("opinion {value} of node {node} outside [{lo}, {hi}]")]
    OpinionOutOfRange { node: usize, value: f64, lo: f64, hi: f64 },
    #[error("degenerate regression input: {0}")]
    Degenerate(&'static str),
    #[error("inconsistent generator spec: {0}")]
    InvalidSynthSpec(String),
}
