//! One model step: opinion diffusion with amplification, stochastic
//! friendship formation and breaking, then re-clustering and re-weighting.

use alloc::vec::Vec;

use rand::Rng;

use crate::clustering::{best_partition_with, ClusteringOptions, Partition};
use crate::graph::{Bounds, DynamicNetwork, NodeId, UndirectedGraph};
use crate::{Error, RandomStream};

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenInterval {
    pub lo: f64,
    pub hi: f64,
}

impl OpenInterval {
    pub fn contains(&self, y: f64) -> bool {
        self.lo < y && y < self.hi
    }
}

/// Union of open intervals in which opinions are amplified.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AmpDomain(pub Vec<OpenInterval>);

impl AmpDomain {
    pub fn empty() -> Self {
        AmpDomain(Vec::new())
    }

    /// `(-1, 0) ∪ (1.5, 2)`: mildly negative and strongly positive opinions.
    pub fn survey() -> Self {
        AmpDomain(alloc::vec![
            OpenInterval { lo: -1.0, hi: 0.0 },
            OpenInterval { lo: 1.5, hi: 2.0 },
        ])
    }

    pub fn contains(&self, y: f64) -> bool {
        self.0.iter().any(|iv| iv.contains(y))
    }
}

/// How each node picks the friendships it tries to form and break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConnectionMode {
    /// One uniformly drawn candidate to form and one existing friendship to
    /// break per node and step.
    #[default]
    SingleDraw,
    /// Every candidate and every existing friendship gets its own
    /// Bernoulli trial.
    Independent,
}

/// Model constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Intra-cluster influence weight, `>= 1`.
    pub w: f64,
    /// Amplification factor, `>= 1`.
    pub k_amp: f64,
    /// Cluster preference, `[0, 0.5)`.
    pub c: f64,
    /// Opinion learning rate, `(0, 1]`.
    pub alpha: f64,
    /// Connection update rate, `(0, 1]`.
    pub beta: f64,
    pub amp_domain: AmpDomain,
    pub bounds: Bounds,
    pub connection_mode: ConnectionMode,
}

impl ModelParams {
    /// Constants fitted to the student survey: `w = 5`, `k = 1.05`,
    /// `c = 0.245`, `alpha = 0.10`, `beta = 0.15`.
    pub fn calibrated() -> Self {
        ModelParams {
            w: 5.0,
            k_amp: 1.05,
            c: 0.245,
            alpha: 0.10,
            beta: 0.15,
            amp_domain: AmpDomain::survey(),
            bounds: Bounds::default(),
            connection_mode: ConnectionMode::SingleDraw,
        }
    }

    /// Checks every range constraint.
    ///
    /// `alpha` and `beta` may also be zero, which freezes the respective
    /// update; the frozen case is useful for tests and sensitivity runs.
    pub fn validate(&self) -> Result<(), Error> {
        fn bad(name: &'static str, value: f64, reason: &'static str) -> Result<(), Error> {
            Err(Error::InvalidParameter { name, value, reason })
        }
        if !(self.w >= 1.0 && self.w.is_finite()) {
            return bad("w", self.w, "must be >= 1");
        }
        if !(self.k_amp >= 1.0 && self.k_amp.is_finite()) {
            return bad("k_amp", self.k_amp, "must be >= 1");
        }
        if !(0.0..0.5).contains(&self.c) {
            return bad("c", self.c, "must lie in [0, 0.5)");
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad("alpha", self.alpha, "must lie in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return bad("beta", self.beta, "must lie in (0, 1]");
        }
        Bounds::new(self.bounds.lo, self.bounds.hi)?;
        for iv in &self.amp_domain.0 {
            if !(iv.lo < iv.hi && self.bounds.lo <= iv.lo && iv.hi <= self.bounds.hi) {
                return bad("amp_domain", iv.lo, "intervals must be non-empty and within bounds");
            }
        }
        Ok(())
    }
}

/// Pull exerted on `i` by its friends:
/// `alpha * Σ_j (a_ij / Σ_k a_ik) (o_j - o_i)`, zero without friends.
pub fn influence(net: &DynamicNetwork, i: NodeId, alpha: f64) -> f64 {
    let total = net.out_weight_sum(i);
    if total == 0.0 {
        return 0.0;
    }
    let oi = net.opinion(i);
    let pull: f64 = net
        .out_neighbors(i)
        .map(|j| net.weight(i, j) / total * (net.opinion(j) - oi))
        .sum();
    alpha * pull
}

/// Multiplies `y` by `k_amp` inside the amplification domain, then clamps to
/// the opinion bounds.
pub fn amplify(y: f64, params: &ModelParams) -> f64 {
    let v = if params.amp_domain.contains(y) {
        params.k_amp * y
    } else {
        y
    };
    params.bounds.clamp(v)
}

/// Synchronous opinion update; all influences use the pre-update opinions.
pub fn update_opinions(net: &mut DynamicNetwork, params: &ModelParams) {
    let next: Vec<f64> = (0..net.len())
        .map(|i| amplify(net.opinion(i) + influence(net, i, params.alpha), params))
        .collect();
    for (i, o) in next.into_iter().enumerate() {
        net.set_opinion(i, o);
    }
}

/// Nodes `i` may befriend: not yet friends, and either a friend of a friend
/// or already counting `i` as a friend. Ascending order.
pub fn candidate_formations(net: &DynamicNetwork, i: NodeId) -> Vec<NodeId> {
    let n = net.len();
    let mut reachable = alloc::vec![false; n];
    for l in net.out_neighbors(i) {
        for j in net.out_neighbors(l) {
            reachable[j] = true;
        }
    }
    (0..n)
        .filter(|&j| j != i && !net.has_edge(i, j) && (reachable[j] || net.has_edge(j, i)))
        .collect()
}

/// Friendship persistence odds `p_ij`: `0.5 + c` inside a shared cluster,
/// `0.5 - c` across clusters, `0.5` if either node is unclustered.
pub fn cluster_affinity(p: &Partition, i: NodeId, j: NodeId, c: f64) -> f64 {
    match (p.cluster_of(i), p.cluster_of(j)) {
        (Some(a), Some(b)) if a == b => 0.5 + c,
        (Some(_), Some(_)) => 0.5 - c,
        _ => 0.5,
    }
}

fn new_edge_weight(p: &Partition, i: NodeId, j: NodeId, w: f64) -> f64 {
    if p.same_cluster(i, j) {
        w
    } else {
        1.0
    }
}

/// Stochastic friendship update. Nodes act in ascending order on the shared
/// network; within a node's turn formation precedes breaking and a friendship
/// formed this turn cannot be broken in the same turn.
pub fn update_connections(
    net: &mut DynamicNetwork,
    p: &Partition,
    params: &ModelParams,
    rng: &mut RandomStream,
) {
    let beta = params.beta;
    let c = params.c;
    for i in 0..net.len() {
        match params.connection_mode {
            ConnectionMode::SingleDraw => {
                let candidates = candidate_formations(net, i);
                let mut formed = None;
                if !candidates.is_empty() {
                    let j = candidates[rng.gen_range(0..candidates.len())];
                    if rng.gen::<f64>() < beta * cluster_affinity(p, i, j, c) {
                        net.set_weight(i, j, new_edge_weight(p, i, j, params.w));
                        formed = Some(j);
                    }
                }
                let existing: Vec<NodeId> =
                    net.out_neighbors(i).filter(|&j| Some(j) != formed).collect();
                if !existing.is_empty() {
                    let j = existing[rng.gen_range(0..existing.len())];
                    if rng.gen::<f64>() < beta * (1.0 - cluster_affinity(p, i, j, c)) {
                        net.remove_edge(i, j);
                    }
                }
            }
            ConnectionMode::Independent => {
                let candidates = candidate_formations(net, i);
                let existing: Vec<NodeId> = net.out_neighbors(i).collect();
                for j in candidates {
                    if rng.gen::<f64>() < beta * cluster_affinity(p, i, j, c) {
                        net.set_weight(i, j, new_edge_weight(p, i, j, params.w));
                    }
                }
                for j in existing {
                    if rng.gen::<f64>() < beta * (1.0 - cluster_affinity(p, i, j, c)) {
                        net.remove_edge(i, j);
                    }
                }
            }
        }
    }
}

/// Network together with the partition its weights were derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub net: DynamicNetwork,
    pub partition: Partition,
    // projection `partition` was computed from; clustering is skipped while
    // it is unchanged
    projection: UndirectedGraph,
}

impl SimState {
    /// Clusters `net` and applies cluster weights.
    pub fn initialize(
        net: &DynamicNetwork,
        params: &ModelParams,
        opts: &ClusteringOptions,
    ) -> Result<Self, Error> {
        let mut net = net.unweighted();
        let projection = net.undirected_projection();
        let partition = best_partition_with(&projection, opts);
        net.apply_cluster_weights(&partition, params.w)?;
        Ok(SimState { net, partition, projection })
    }
}

/// Advances one time step: opinions, then connections (under the current
/// partition), then optionally re-clustering, then re-weighting.
pub fn step(
    state: &mut SimState,
    params: &ModelParams,
    opts: &ClusteringOptions,
    recluster: bool,
    rng: &mut RandomStream,
) -> Result<(), Error> {
    update_opinions(&mut state.net, params);
    update_connections(&mut state.net, &state.partition, params, rng);
    if recluster {
        let projection = state.net.undirected_projection();
        if projection != state.projection {
            state.partition = best_partition_with(&projection, opts);
            state.projection = projection;
        }
    }
    state.net.apply_cluster_weights(&state.partition, params.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::Cluster;
    use alloc::vec;
    use rand::SeedableRng;

    fn net_with(opinions: Vec<f64>, edges: &[(usize, usize)]) -> DynamicNetwork {
        DynamicNetwork::from_edges(opinions, Bounds::default(), edges.iter().copied()).unwrap()
    }

    fn params() -> ModelParams {
        ModelParams::calibrated()
    }

    /// Independent evaluation of the influence sum straight off the dense
    /// weights, without the out-neighbour iterator.
    fn influence_oracle(net: &DynamicNetwork, i: usize, alpha: f64) -> f64 {
        let mut denom = 0.0;
        for k in 0..net.len() {
            denom += net.weight(i, k);
        }
        if denom == 0.0 {
            return 0.0;
        }
        let mut q = 0.0;
        for j in 0..net.len() {
            q += alpha * (net.weight(i, j) / denom) * (net.opinion(j) - net.opinion(i));
        }
        q
    }

    #[test]
    fn influence_examples() {
        let mut n = net_with(vec![0.0, 2.0], &[(0, 1)]);
        n.set_weight(0, 1, 5.0);
        assert!((influence(&n, 0, 0.1) - 0.2).abs() < 1e-15);

        let n = net_with(vec![1.0, 1.0, 1.0], &[(0, 1), (0, 2)]);
        assert_eq!(influence(&n, 0, 0.1), 0.0);

        let mut n = net_with(vec![0.0, 2.0, -1.0], &[(0, 1), (0, 2)]);
        n.set_weight(0, 1, 5.0);
        let q = influence(&n, 0, 0.1);
        assert!((q - 0.15).abs() < 1e-15);
        assert!((q - influence_oracle(&n, 0, 0.1)).abs() < 1e-15);

        let isolated = net_with(vec![1.0], &[]);
        assert_eq!(influence(&isolated, 0, 0.1), 0.0);
    }

    #[test]
    fn amplify_examples() {
        let p = params();
        assert!((amplify(1.6, &p) - 1.68).abs() < 1e-12);
        assert_eq!(amplify(0.5, &p), 0.5);
        assert!((amplify(-0.99, &p) - (-1.0395)).abs() < 1e-12);
        // boundaries of an open domain are not amplified
        assert_eq!(amplify(2.0, &p), 2.0);
        assert_eq!(amplify(-1.0, &p), -1.0);
        let strong = ModelParams { k_amp: 2.0, ..params() };
        assert_eq!(amplify(1.9, &strong), 2.0);
    }

    #[test]
    fn synchronous_update_swaps_pair_at_full_rate() {
        let mut n = net_with(vec![0.4, 0.6], &[(0, 1), (1, 0)]);
        let p = ModelParams {
            alpha: 1.0,
            k_amp: 1.0,
            ..params()
        };
        update_opinions(&mut n, &p);
        assert!((n.opinion(0) - 0.6).abs() < 1e-15);
        assert!((n.opinion(1) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn uniform_and_isolated_opinions() {
        let edges = [(0, 1), (1, 2), (2, 0)];
        let mut n = net_with(vec![1.0; 3], &edges);
        update_opinions(&mut n, &params());
        assert_eq!(n.opinions(), &[1.0, 1.0, 1.0]);

        let mut n = net_with(vec![1.6; 3], &edges);
        update_opinions(&mut n, &params());
        assert!(n.opinions().iter().all(|&o| (o - 1.68).abs() < 1e-12));
    }

    #[test]
    fn candidates() {
        let n = net_with(vec![0.0; 3], &[(0, 1), (1, 2)]);
        assert_eq!(candidate_formations(&n, 0), vec![2]);
        let n = net_with(vec![0.0; 2], &[(1, 0)]);
        assert_eq!(candidate_formations(&n, 0), vec![1]);
        let n = net_with(vec![0.0; 3], &[(0, 1)]);
        assert!(candidate_formations(&n, 2).is_empty());
    }

    #[test]
    fn affinity_cases() {
        let p = Partition::from_clusters(
            7,
            vec![Cluster::new(vec![0, 1, 2]), Cluster::new(vec![3, 4, 5])],
        );
        assert!((cluster_affinity(&p, 0, 1, 0.245) - 0.745).abs() < 1e-15);
        assert!((cluster_affinity(&p, 0, 3, 0.245) - 0.255).abs() < 1e-15);
        assert_eq!(cluster_affinity(&p, 0, 6, 0.245), 0.5);
        assert_eq!(cluster_affinity(&p, 6, 0, 0.245), 0.5);
    }

    #[test]
    fn zero_beta_freezes_topology() {
        let mut n = net_with(vec![0.0; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let before = n.clone();
        let p = ModelParams { beta: 0.0, ..params() };
        let mut rng = RandomStream::seed_from_u64(3);
        update_connections(&mut n, &Partition::unclustered(4), &p, &mut rng);
        assert_eq!(n, before);
    }

    #[test]
    fn near_half_preference_keeps_cluster_edges() {
        let p = ModelParams {
            beta: 1.0,
            c: 0.4999999,
            ..params()
        };
        let part = Partition::from_clusters(3, vec![Cluster::new(vec![0, 1, 2])]);
        let mut n = net_with(vec![0.0; 3], &[(0, 1), (1, 2), (2, 0)]);
        let mut rng = RandomStream::seed_from_u64(11);
        for _ in 0..20 {
            update_connections(&mut n, &part, &p, &mut rng);
        }
        // every candidate forms with probability ~1 and nothing breaks
        assert_eq!(n.edge_count(), 6);
    }

    #[test]
    fn validation() {
        assert!(params().validate().is_ok());
        assert!(ModelParams { w: 0.5, ..params() }.validate().is_err());
        assert!(ModelParams { c: 0.5, ..params() }.validate().is_err());
        assert!(ModelParams { k_amp: 0.9, ..params() }.validate().is_err());
        assert!(ModelParams { alpha: 1.5, ..params() }.validate().is_err());
        let mut p = params();
        p.amp_domain = AmpDomain(vec![OpenInterval { lo: 1.5, hi: 3.0 }]);
        assert!(p.validate().is_err());
    }

    #[test]
    fn frozen_step_is_fixed_point() {
        let p = ModelParams {
            alpha: 0.0,
            beta: 0.0,
            k_amp: 1.0,
            ..params()
        };
        let n = net_with(
            vec![0.5, -1.0, 2.0, 0.0],
            &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0), (3, 0)],
        );
        let opts = ClusteringOptions::default();
        let mut s = SimState::initialize(&n, &p, &opts).unwrap();
        let before = s.clone();
        let mut rng = RandomStream::seed_from_u64(0);
        step(&mut s, &p, &opts, true, &mut rng).unwrap();
        assert_eq!(s, before);
    }
}
