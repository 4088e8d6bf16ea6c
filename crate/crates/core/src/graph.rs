//! Directed network state and its undirected projection.

use alloc::vec;
use alloc::vec::Vec;

use crate::clustering::Partition;
use crate::Error;

/// Dense node index, `0..n` within one network.
pub type NodeId = usize;

/// Closed interval of admissible opinions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self, Error> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidParameter {
                name: "bounds",
                value: lo,
                reason: "bounds must be finite with lo <= hi",
            });
        }
        Ok(Bounds { lo, hi })
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl Default for Bounds {
    /// The five-point health scale, `[-2, 2]`.
    fn default() -> Self {
        Bounds { lo: -2.0, hi: 2.0 }
    }
}

/// Directed friendship network with per-edge weights and per-node opinions.
///
/// Adjacency is stored densely, row `i` holding the out-edges of node `i`.
/// Entries are `0` (no edge), `1` or the current intra-cluster weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicNetwork {
    n: usize,
    opinions: Vec<f64>,
    adjacency: Vec<f64>,
    bounds: Bounds,
}

impl DynamicNetwork {
    /// Edgeless network. Opinions are clamped into `bounds`.
    pub fn new(opinions: Vec<f64>, bounds: Bounds) -> Self {
        let n = opinions.len();
        let opinions = opinions.into_iter().map(|o| bounds.clamp(o)).collect();
        DynamicNetwork {
            n,
            opinions,
            adjacency: vec![0.0; n * n],
            bounds,
        }
    }

    /// Builds a network with unit-weight edges, rejecting self-loops and
    /// out-of-range endpoints.
    pub fn from_edges(
        opinions: Vec<f64>,
        bounds: Bounds,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, Error> {
        let mut net = DynamicNetwork::new(opinions, bounds);
        for (i, j) in edges {
            net.add_edge(i, j)?;
        }
        Ok(net)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn opinions(&self) -> &[f64] {
        &self.opinions
    }

    pub fn opinion(&self, i: NodeId) -> f64 {
        self.opinions[i]
    }

    /// Sets an opinion, clamped into the network bounds.
    pub fn set_opinion(&mut self, i: NodeId, value: f64) {
        self.opinions[i] = self.bounds.clamp(value);
    }

    pub fn weight(&self, i: NodeId, j: NodeId) -> f64 {
        self.adjacency[i * self.n + j]
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.weight(i, j) > 0.0
    }

    fn check(&self, i: NodeId, j: NodeId) -> Result<(), Error> {
        for node in [i, j] {
            if node >= self.n {
                return Err(Error::NodeOutOfRange { node, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(())
    }

    /// Adds `i -> j` with weight 1 (no-op on the weight if it already exists).
    pub fn add_edge(&mut self, i: NodeId, j: NodeId) -> Result<(), Error> {
        self.check(i, j)?;
        if !self.has_edge(i, j) {
            self.adjacency[i * self.n + j] = 1.0;
        }
        Ok(())
    }

    pub(crate) fn set_weight(&mut self, i: NodeId, j: NodeId, weight: f64) {
        debug_assert!(i != j);
        self.adjacency[i * self.n + j] = weight;
    }

    pub fn remove_edge(&mut self, i: NodeId, j: NodeId) {
        self.adjacency[i * self.n + j] = 0.0;
    }

    /// Out-neighbours of `i` in ascending order.
    pub fn out_neighbors(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let row = &self.adjacency[i * self.n..(i + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(j, _)| j)
    }

    pub fn out_degree(&self, i: NodeId) -> usize {
        self.out_neighbors(i).count()
    }

    /// All edges `(i, j, weight)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        let n = self.n;
        self.adjacency
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(move |(idx, &w)| (idx / n, idx % n, w))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&w| w > 0.0).count()
    }

    /// `Σ_k a_ik`: total weight of node `i`'s outgoing friendships.
    pub fn out_weight_sum(&self, i: NodeId) -> f64 {
        self.adjacency[i * self.n..(i + 1) * self.n].iter().sum()
    }

    /// Undirected graph with `{i, j}` present iff both `i -> j` and `j -> i`
    /// exist.
    pub fn undirected_projection(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::new(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) && self.has_edge(j, i) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Reweights every existing edge: `w` between members of the same
    /// cluster, `1` otherwise (including any edge touching an unclustered
    /// node).
    pub fn apply_cluster_weights(&mut self, partition: &Partition, w: f64) -> Result<(), Error> {
        if !(w >= 1.0) || !w.is_finite() {
            return Err(Error::InvalidParameter {
                name: "w",
                value: w,
                reason: "intra-cluster weight must be >= 1",
            });
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let idx = i * self.n + j;
                if self.adjacency[idx] > 0.0 {
                    self.adjacency[idx] = if partition.same_cluster(i, j) { w } else { 1.0 };
                }
            }
        }
        Ok(())
    }

    /// Same network with every edge weight reset to 1.
    pub fn unweighted(&self) -> DynamicNetwork {
        let mut out = self.clone();
        for a in out.adjacency.iter_mut() {
            if *a > 0.0 {
                *a = 1.0;
            }
        }
        out
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<NodeId>>,
    edges: usize,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut g = UndirectedGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Inserts `{u, v}`; returns false for self-loops and existing edges.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edges += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(pos);
                self.edges -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}
