//! Metric time-series files.
//!
//! Comma-separated, one header line, then one row per `(replicate, t)` in
//! replicate-major order, then one `mean` row per recorded step. Undefined
//! values (no clusters) are empty fields. Floats are written in their
//! shortest round-trip decimal form.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use coevonet_core::{ClusterAverages, MeanRow, MetricsRow, RunResult};

pub const HEADER: &str = "replicate,t,avg_cluster_opinion,avg_opinion_spread,avg_inner_connectivity,avg_cluster_size,cluster_count";

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn push_averages(out: &mut String, averages: Option<ClusterAverages>) {
    match averages {
        Some(a) => {
            let _ = write!(out, "{},{},{},{}", a.opinion, a.spread, a.connectivity, a.size);
        }
        None => out.push_str(",,,"),
    }
}

pub fn format_series(result: &RunResult) -> String {
    let mut out = String::with_capacity(64 * (result.per_replicate.len() + 1) * result.mean_series.len());
    out.push_str(HEADER);
    out.push('\n');
    for (r, rows) in result.per_replicate.iter().enumerate() {
        for row in rows {
            let _ = write!(out, "{r},{},", row.t);
            push_averages(&mut out, row.averages);
            let _ = writeln!(out, ",{}", row.cluster_count);
        }
    }
    for m in &result.mean_series {
        let _ = write!(out, "mean,{},", m.t);
        push_averages(&mut out, m.averages);
        let _ = writeln!(out, ",{}", m.cluster_count);
    }
    out
}

pub fn write_series(result: &RunResult, path: &Path) -> Result<(), SeriesError> {
    std::fs::write(path, format_series(result)).map_err(|source| SeriesError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Series file contents. Mean rows carry no inclusion count, so
/// [`MeanRow::included`] is reported as 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesFile {
    pub replicates: Vec<Vec<MetricsRow>>,
    pub means: Vec<MeanRow>,
}

impl SeriesFile {
    /// Mean row recorded at step `t`.
    pub fn mean_at(&self, t: usize) -> Option<&MeanRow> {
        self.means.iter().find(|m| m.t == t)
    }
}

pub fn parse_series(text: &str) -> Result<SeriesFile, SeriesError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        _ => {
            return Err(SeriesError::Parse {
                line: 1,
                msg: format!("expected header `{HEADER}`"),
            })
        }
    }
    let mut out = SeriesFile::default();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 7 {
            return Err(SeriesError::Parse {
                line,
                msg: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let bad = |what: &str, v: &str| SeriesError::Parse {
            line,
            msg: format!("bad {what} `{v}`"),
        };
        let t: usize = fields[1].parse().map_err(|_| bad("step", fields[1]))?;
        let floats: Vec<Option<f64>> = fields[2..6]
            .iter()
            .map(|f| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>().map(Some).map_err(|_| bad("number", f))
                }
            })
            .collect::<Result<_, _>>()?;
        let averages = match floats.as_slice() {
            [Some(o), Some(s), Some(c), Some(z)] => Some(ClusterAverages {
                opinion: *o,
                spread: *s,
                connectivity: *c,
                size: *z,
            }),
            [None, None, None, None] => None,
            _ => {
                return Err(SeriesError::Parse {
                    line,
                    msg: "metric fields must be all present or all empty".into(),
                })
            }
        };
        if fields[0] == "mean" {
            let cluster_count = fields[6].parse().map_err(|_| bad("cluster count", fields[6]))?;
            out.means.push(MeanRow {
                t,
                included: 0,
                averages,
                cluster_count,
            });
        } else {
            let r: usize = fields[0].parse().map_err(|_| bad("replicate", fields[0]))?;
            let cluster_count = fields[6].parse().map_err(|_| bad("cluster count", fields[6]))?;
            if r == out.replicates.len() {
                out.replicates.push(Vec::new());
            } else if r + 1 != out.replicates.len() {
                return Err(SeriesError::Parse {
                    line,
                    msg: format!("replicate {r} out of order"),
                });
            }
            out.replicates[r].push(MetricsRow {
                t,
                cluster_count,
                averages,
            });
        }
    }
    Ok(out)
}

pub fn read_series(path: &Path) -> Result<SeriesFile, SeriesError> {
    let text = std::fs::read_to_string(path).map_err(|source| SeriesError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_series(&text)
}
