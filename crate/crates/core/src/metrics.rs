//! Per-cluster observables and their per-step averages.

use crate::clustering::{Cluster, Partition};
use crate::graph::DynamicNetwork;

/// Mean member opinion.
pub fn cluster_opinion(net: &DynamicNetwork, cluster: &Cluster) -> f64 {
    let sum: f64 = cluster.members().iter().map(|&i| net.opinion(i)).sum();
    sum / cluster.len() as f64
}

/// Mean absolute deviation of member opinions from the cluster opinion.
pub fn opinion_spread(net: &DynamicNetwork, cluster: &Cluster) -> f64 {
    let mean = cluster_opinion(net, cluster);
    let sum: f64 = cluster
        .members()
        .iter()
        .map(|&i| (net.opinion(i) - mean).abs())
        .sum();
    sum / cluster.len() as f64
}

/// Directed edges between members divided by `k(k - 1)`.
pub fn inner_connectivity(net: &DynamicNetwork, cluster: &Cluster) -> f64 {
    let members = cluster.members();
    let k = members.len();
    let mut edges = 0usize;
    for &i in members {
        for &j in members {
            if i != j && net.has_edge(i, j) {
                edges += 1;
            }
        }
    }
    edges as f64 / (k * (k - 1)) as f64
}

/// Unweighted means over the clusters of one partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterAverages {
    pub opinion: f64,
    pub spread: f64,
    pub connectivity: f64,
    pub size: f64,
}

/// Cluster observables at one time step. `averages` is `None` when the
/// partition has no clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub t: usize,
    pub cluster_count: usize,
    pub averages: Option<ClusterAverages>,
}

impl MetricsRow {
    pub fn avg_cluster_opinion(&self) -> Option<f64> {
        self.averages.map(|a| a.opinion)
    }

    pub fn avg_opinion_spread(&self) -> Option<f64> {
        self.averages.map(|a| a.spread)
    }

    pub fn avg_inner_connectivity(&self) -> Option<f64> {
        self.averages.map(|a| a.connectivity)
    }

    pub fn avg_cluster_size(&self) -> Option<f64> {
        self.averages.map(|a| a.size)
    }
}

pub fn metrics_row(net: &DynamicNetwork, partition: &Partition, t: usize) -> MetricsRow {
    let clusters = partition.clusters();
    let count = clusters.len();
    let averages = (count > 0).then(|| {
        let mut acc = ClusterAverages {
            opinion: 0.0,
            spread: 0.0,
            connectivity: 0.0,
            size: 0.0,
        };
        for c in clusters {
            acc.opinion += cluster_opinion(net, c);
            acc.spread += opinion_spread(net, c);
            acc.connectivity += inner_connectivity(net, c);
            acc.size += c.len() as f64;
        }
        let k = count as f64;
        ClusterAverages {
            opinion: acc.opinion / k,
            spread: acc.spread / k,
            connectivity: acc.connectivity / k,
            size: acc.size / k,
        }
    });
    MetricsRow {
        t,
        cluster_count: count,
        averages,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Bounds;
    use alloc::vec;
    use alloc::vec::Vec;

    fn net_with(opinions: Vec<f64>, edges: &[(usize, usize)]) -> DynamicNetwork {
        DynamicNetwork::from_edges(opinions, Bounds::default(), edges.iter().copied()).unwrap()
    }

    #[test]
    fn opinion_and_spread() {
        let all = |n| Cluster::new((0..n).collect());
        let n = net_with(vec![2.0, 1.0, 0.0], &[]);
        assert_eq!(cluster_opinion(&n, &all(3)), 1.0);
        assert_eq!(opinion_spread(&n, &all(3)), 2.0 / 3.0);

        let n = net_with(vec![2.0; 4], &[]);
        assert_eq!(cluster_opinion(&n, &all(4)), 2.0);
        assert_eq!(opinion_spread(&n, &all(4)), 0.0);

        let n = net_with(vec![-2.0, -1.0, 0.0, 1.0, 2.0], &[]);
        assert_eq!(cluster_opinion(&n, &all(5)), 0.0);

        let n = net_with(vec![-2.0, 0.0, 2.0], &[]);
        assert_eq!(opinion_spread(&n, &all(3)), 4.0 / 3.0);
    }

    #[test]
    fn connectivity() {
        let c = Cluster::new(vec![0, 1, 2]);
        let n = net_with(vec![0.0; 3], &[(0, 1), (1, 0), (1, 2), (2, 0)]);
        assert_eq!(inner_connectivity(&n, &c), 4.0 / 6.0);
        let n = net_with(vec![0.0; 3], &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]);
        assert_eq!(inner_connectivity(&n, &c), 1.0);
        let n = net_with(vec![0.0; 4], &[(0, 3), (3, 1)]);
        assert_eq!(inner_connectivity(&n, &c), 0.0);
    }

    #[test]
    fn row_is_mean_of_means() {
        let n = net_with(vec![1.0, 1.0, 1.0, 0.0, 0.5, 1.0], &[]);
        let p = Partition::from_clusters(6, vec![Cluster::new(vec![0, 1, 2]), Cluster::new(vec![3, 4, 5])]);
        let row = metrics_row(&n, &p, 7);
        assert_eq!(row.t, 7);
        assert_eq!(row.cluster_count, 2);
        assert_eq!(row.avg_cluster_opinion(), Some(0.75));
        assert_eq!(row.avg_cluster_size(), Some(3.0));
        assert_eq!(row.avg_opinion_spread(), Some((0.0 + 1.0 / 3.0) / 2.0));
    }

    #[test]
    fn empty_partition_row_is_undefined() {
        let n = net_with(vec![0.0; 4], &[]);
        let row = metrics_row(&n, &Partition::unclustered(4), 0);
        assert_eq!(row.cluster_count, 0);
        assert!(row.averages.is_none());
    }
}
