//! Survey-wave files.
//!
//! ```text
//! # comments start with '#'
//! [meta]
//! label=2008.09
//! [opinions]
//! node_id,opinion
//! [edges]
//! from_id,to_id
//! ```
//!
//! Opinions are integers on the five-point scale `-2..=2`. Node ids are
//! arbitrary non-negative integers; [`wave_to_network`] re-indexes them
//! densely in ascending id order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use coevonet_core::{Bounds, DynamicNetwork, NodeId};

/// Lowest and highest admissible survey answer.
pub const SCALE: (i32, i32) = (-2, 2);

#[derive(Debug, thiserror::Error)]
pub enum WaveError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: opinion {value} of node {node} outside {}..={}", SCALE.0, SCALE.1)]
    OpinionRange { line: usize, node: u64, value: i64 },
    #[error("line {line}: node {node} listed twice")]
    DuplicateNode { line: usize, node: u64 },
    #[error("line {line}: duplicate edge {from} -> {to}")]
    DuplicateEdge { line: usize, from: u64, to: u64 },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("line {line}: edge endpoint {node} has no opinion entry")]
    Dangling { line: usize, node: u64 },
}

/// One observed snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurveyWave {
    pub label: String,
    pub opinions: BTreeMap<u64, i32>,
    pub edges: Vec<(u64, u64)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Meta,
    Opinions,
    Edges,
}

fn parse_pair(line: usize, text: &str) -> Result<(u64, i64), WaveError> {
    let mut parts = text.split(',').map(str::trim);
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(WaveError::Parse {
            line,
            msg: format!("expected two comma-separated fields, got `{text}`"),
        });
    };
    let a = a.parse::<u64>().map_err(|e| WaveError::Parse {
        line,
        msg: format!("bad node id `{a}`: {e}"),
    })?;
    let b = b.parse::<i64>().map_err(|e| WaveError::Parse {
        line,
        msg: format!("bad integer `{b}`: {e}"),
    })?;
    Ok((a, b))
}

/// Parses and validates wave text.
pub fn parse_wave(text: &str) -> Result<SurveyWave, WaveError> {
    let mut wave = SurveyWave::default();
    let mut section = Section::None;
    let mut pending_edges = Vec::new();
    let mut seen_edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            section = match content {
                "[meta]" => Section::Meta,
                "[opinions]" => Section::Opinions,
                "[edges]" => Section::Edges,
                other => {
                    return Err(WaveError::Parse {
                        line,
                        msg: format!("unknown section `{other}`"),
                    })
                }
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(WaveError::Parse {
                    line,
                    msg: "data before any section header".into(),
                })
            }
            Section::Meta => {
                let Some((key, value)) = content.split_once('=') else {
                    return Err(WaveError::Parse {
                        line,
                        msg: format!("expected key=value, got `{content}`"),
                    });
                };
                match key.trim() {
                    "label" => wave.label = value.trim().to_string(),
                    other => {
                        return Err(WaveError::Parse {
                            line,
                            msg: format!("unknown meta key `{other}`"),
                        })
                    }
                }
            }
            Section::Opinions => {
                let (node, value) = parse_pair(line, content)?;
                if !(SCALE.0 as i64..=SCALE.1 as i64).contains(&value) {
                    return Err(WaveError::OpinionRange { line, node, value });
                }
                if wave.opinions.insert(node, value as i32).is_some() {
                    return Err(WaveError::DuplicateNode { line, node });
                }
            }
            Section::Edges => {
                let (from, to) = parse_pair(line, content)?;
                let to = u64::try_from(to).map_err(|_| WaveError::Parse {
                    line,
                    msg: format!("bad node id `{to}`"),
                })?;
                if from == to {
                    return Err(WaveError::SelfLoop { line, node: from });
                }
                if !seen_edges.insert((from, to)) {
                    return Err(WaveError::DuplicateEdge { line, from, to });
                }
                pending_edges.push((line, from, to));
            }
        }
    }
    for (line, from, to) in pending_edges {
        for node in [from, to] {
            if !wave.opinions.contains_key(&node) {
                return Err(WaveError::Dangling { line, node });
            }
        }
        wave.edges.push((from, to));
    }
    Ok(wave)
}

pub fn load_wave(path: &Path) -> Result<SurveyWave, WaveError> {
    let text = std::fs::read_to_string(path).map_err(|source| WaveError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_wave(&text)
}

/// Serializes a wave; [`parse_wave`] reads it back unchanged.
pub fn format_wave(wave: &SurveyWave) -> String {
    let mut out = String::new();
    if !wave.label.is_empty() {
        let _ = writeln!(out, "[meta]\nlabel={}", wave.label);
    }
    out.push_str("[opinions]\n");
    for (id, o) in &wave.opinions {
        let _ = writeln!(out, "{id},{o}");
    }
    out.push_str("[edges]\n");
    for (a, b) in &wave.edges {
        let _ = writeln!(out, "{a},{b}");
    }
    out
}

pub fn write_wave(wave: &SurveyWave, path: &Path) -> Result<(), WaveError> {
    std::fs::write(path, format_wave(wave)).map_err(|source| WaveError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Dense network for a wave, plus the original id of each dense index.
/// All edges get weight 1.
pub fn wave_to_network(wave: &SurveyWave, bounds: Bounds) -> (DynamicNetwork, Vec<u64>) {
    let ids: Vec<u64> = wave.opinions.keys().copied().collect();
    let index: BTreeMap<u64, NodeId> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let opinions = wave.opinions.values().map(|&o| o as f64).collect();
    let edges = wave.edges.iter().map(|(a, b)| (index[a], index[b]));
    let net = DynamicNetwork::from_edges(opinions, bounds, edges)
        .expect("validated wave has no self-loops or dangling endpoints");
    (net, ids)
}

/// Wave for a network whose opinions are already on the integer scale
/// (as produced by the generator). Node ids are the dense indices.
pub fn network_to_wave(net: &DynamicNetwork, label: &str) -> SurveyWave {
    SurveyWave {
        label: label.to_string(),
        opinions: net
            .opinions()
            .iter()
            .enumerate()
            .map(|(i, &o)| (i as u64, o.round() as i32))
            .collect(),
        edges: net.edges().map(|(i, j, _)| (i as u64, j as u64)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_wave() {
        let w = parse_wave("[opinions]\n10,2\n20,-1\n[edges]\n10,20\n").unwrap();
        assert_eq!(w.opinions.len(), 2);
        assert_eq!(w.edges, vec![(10, 20)]);
        let (net, ids) = wave_to_network(&w, Bounds::default());
        assert_eq!(ids, vec![10, 20]);
        assert_eq!(net.opinions(), &[2.0, -1.0]);
        assert!(net.has_edge(0, 1));
        assert!(!net.has_edge(1, 0));
    }

    #[test]
    fn comments_and_label() {
        let w = parse_wave("# header\n[meta]\nlabel = 2008.09\n\n[opinions]\n1,0 # trailing\n").unwrap();
        assert_eq!(w.label, "2008.09");
        assert_eq!(w.opinions[&1], 0);
    }

    #[test]
    fn errors_name_line_and_node() {
        let err = parse_wave("[opinions]\n1,0\n2,3\n").unwrap_err();
        assert!(matches!(err, WaveError::OpinionRange { line: 3, node: 2, value: 3 }));
        let err = parse_wave("[opinions]\n1,0\n[edges]\n1,9\n").unwrap_err();
        assert!(matches!(err, WaveError::Dangling { line: 4, node: 9 }));
        let err = parse_wave("[opinions]\n1,0\n2,0\n[edges]\n1,2\n1,2\n").unwrap_err();
        assert!(matches!(err, WaveError::DuplicateEdge { line: 6, .. }));
        let err = parse_wave("[opinions]\n1,0\n[edges]\n1,1\n").unwrap_err();
        assert!(matches!(err, WaveError::SelfLoop { line: 4, node: 1 }));
        let err = parse_wave("[opinions]\n1,x\n").unwrap_err();
        assert!(matches!(err, WaveError::Parse { line: 2, .. }));
        let err = parse_wave("[opinions]\n1,0\n1,1\n").unwrap_err();
        assert!(matches!(err, WaveError::DuplicateNode { line: 3, node: 1 }));
        assert!(parse_wave("1,0\n").is_err());
    }

    #[test]
    fn empty_wave() {
        let w = parse_wave("").unwrap();
        let (net, _) = wave_to_network(&w, Bounds::default());
        assert!(net.is_empty());
    }

    #[test]
    fn opinions_cast_to_reals() {
        let w = parse_wave("[opinions]\n0,2\n1,0\n2,-1\n").unwrap();
        let (net, _) = wave_to_network(&w, Bounds::default());
        assert_eq!(net.opinions(), &[2.0, 0.0, -1.0]);
    }
}
