//! Community detection by iterative edge-betweenness removal.
//!
//! Edges of the undirected projection are removed one at a time, always the
//! edge with the highest shortest-path betweenness (recomputed after every
//! removal). Each intermediate graph yields a candidate partition: its
//! connected components of more than two nodes are clusters, the rest of the
//! nodes are unclustered. Candidates are scored by the unweighted mean of the
//! per-cluster quality `deg_int / (deg_int + deg_ext)` on the original graph.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{NodeId, UndirectedGraph};

/// Groups of this size or smaller are never clusters.
pub const MAX_NON_CLUSTER_SIZE: usize = 2;

const BETWEENNESS_TIE_EPS: f64 = 1e-9;

/// A connected group of more than two nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    members: Vec<NodeId>,
}

impl Cluster {
    /// # Panics
    /// If `members` holds two or fewer distinct nodes.
    pub fn new(mut members: Vec<NodeId>) -> Self {
        members.sort_unstable();
        members.dedup();
        assert!(
            members.len() > MAX_NON_CLUSTER_SIZE,
            "a cluster needs more than {MAX_NON_CLUSTER_SIZE} members"
        );
        Cluster { members }
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.binary_search(&node).is_ok()
    }
}

/// Disjoint clusters plus the nodes that belong to none of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    clusters: Vec<Cluster>,
    unclustered: Vec<NodeId>,
    membership: Vec<Option<usize>>,
    quality: Option<f64>,
}

impl Partition {
    /// Every node unclustered.
    pub fn unclustered(n: usize) -> Self {
        Partition {
            clusters: Vec::new(),
            unclustered: (0..n).collect(),
            membership: vec![None; n],
            quality: None,
        }
    }

    /// Builds a partition of `n` nodes from disjoint clusters. Quality is left
    /// unset; see [`Partition::scored`].
    ///
    /// # Panics
    /// If clusters overlap or mention nodes `>= n`.
    pub fn from_clusters(n: usize, mut clusters: Vec<Cluster>) -> Self {
        clusters.sort_by_key(|c| c.members[0]);
        let mut membership = vec![None; n];
        for (idx, c) in clusters.iter().enumerate() {
            for &m in &c.members {
                assert!(membership[m].is_none(), "node {m} in two clusters");
                membership[m] = Some(idx);
            }
        }
        let unclustered = (0..n).filter(|&i| membership[i].is_none()).collect();
        Partition {
            clusters,
            unclustered,
            membership,
            quality: None,
        }
    }

    /// Components larger than two become clusters, the rest unclustered.
    pub fn from_components(n: usize, components: Vec<Vec<NodeId>>) -> Self {
        let clusters = components
            .into_iter()
            .filter(|c| c.len() > MAX_NON_CLUSTER_SIZE)
            .map(Cluster::new)
            .collect();
        Partition::from_clusters(n, clusters)
    }

    /// Sets `quality` to the mean cluster quality measured on `graph`.
    pub fn scored(mut self, graph: &UndirectedGraph) -> Self {
        self.quality = average_quality(graph, &self.clusters);
        self
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn unclustered_nodes(&self) -> &[NodeId] {
        &self.unclustered
    }

    pub fn node_count(&self) -> usize {
        self.membership.len()
    }

    /// Mean cluster quality; `None` when there are no clusters or the
    /// partition was never scored.
    pub fn quality(&self) -> Option<f64> {
        self.quality
    }

    pub fn cluster_of(&self, node: NodeId) -> Option<usize> {
        self.membership.get(node).copied().flatten()
    }

    pub fn same_cluster(&self, i: NodeId, j: NodeId) -> bool {
        matches!((self.cluster_of(i), self.cluster_of(j)), (Some(a), Some(b)) if a == b)
    }

    /// True if both partitions group the nodes identically.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.clusters == other.clusters && self.unclustered == other.unclustered
    }
}

/// `deg_int / (deg_int + deg_ext)` for the node set `members`, counting
/// undirected edges fully inside the set and edges with exactly one endpoint
/// inside. Zero when the set touches no edges.
pub fn cluster_quality(graph: &UndirectedGraph, members: &[NodeId]) -> f64 {
    let mut inside = vec![false; graph.node_count()];
    for &m in members {
        inside[m] = true;
    }
    let mut twice_int = 0usize;
    let mut ext = 0usize;
    for &u in members {
        for &v in graph.neighbors(u) {
            if inside[v] {
                twice_int += 1;
            } else {
                ext += 1;
            }
        }
    }
    let int = twice_int / 2;
    if int + ext == 0 {
        0.0
    } else {
        int as f64 / (int + ext) as f64
    }
}

fn average_quality(graph: &UndirectedGraph, clusters: &[Cluster]) -> Option<f64> {
    if clusters.is_empty() {
        return None;
    }
    let sum: f64 = clusters
        .iter()
        .map(|c| cluster_quality(graph, c.members()))
        .sum();
    Some(sum / clusters.len() as f64)
}

/// Shortest-path edge betweenness of every edge, in lexicographic edge order.
///
/// Each unordered node pair contributes one unit, split evenly across its
/// shortest paths.
pub fn edge_betweenness(graph: &UndirectedGraph) -> Vec<((NodeId, NodeId), f64)> {
    let n = graph.node_count();
    let mut scores = vec![0.0; n * n];
    let mut brandes = Brandes::new(graph);
    for s in 0..n {
        brandes.accumulate(s, &mut scores);
    }
    graph
        .edges()
        .map(|(u, v)| ((u, v), scores[u * n + v] + scores[v * n + u]))
        .collect()
}

/// Calls `f` with the index of every set bit of `a & b`, ascending.
#[inline(always)]
fn for_each_common_bit(a: &[u64], b: &[u64], mut f: impl FnMut(usize)) {
    for (k, (&x, &y)) in a.iter().zip(b).enumerate() {
        let mut m = x & y;
        while m != 0 {
            f(k * 64 + m.trailing_zeros() as usize);
            m &= m - 1;
        }
    }
}

#[inline(always)]
fn has_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// Number of bitset words per row, fixed at compile time for the common
/// network sizes.
trait Width: Copy {
    fn get(self) -> usize;
}

#[derive(Clone, Copy)]
struct Fixed<const W: usize>;

impl<const W: usize> Width for Fixed<W> {
    #[inline(always)]
    fn get(self) -> usize {
        W
    }
}

impl Width for usize {
    #[inline(always)]
    fn get(self) -> usize {
        self
    }
}

/// Brandes accumulation over bitset adjacency rows. BFS levels are kept as
/// bitsets, so predecessor lookups touch only the edges of the shortest-path
/// DAG. The score of edge `{u, v}` is `m[u][v] + m[v][u]` in an `n × n`
/// matrix, one half per direction the edge is crossed in.
///
/// Distances and path counts from every source are retained, which lets the
/// share of a single source be withdrawn (or partly withdrawn) later without
/// repeating its BFS.
struct Brandes {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    /// Row per source; entries are valid for the source's current component.
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    /// Level bitsets per source: `n + 1` slots of `words` each, of which the
    /// first `depth[s] + 1` are in use.
    levels: Vec<u64>,
    depth: Vec<usize>,
    visited: Vec<u64>,
    frontier: Vec<u64>,
    touched: Vec<u64>,
}

impl Brandes {
    fn new(graph: &UndirectedGraph) -> Self {
        let n = graph.node_count();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for u in 0..n {
            for &v in graph.neighbors(u) {
                adj[u * words + v / 64] |= 1 << (v % 64);
            }
        }
        Brandes {
            n,
            words,
            adj,
            dist: vec![usize::MAX; n * n],
            sigma: vec![0.0; n * n],
            delta: vec![0.0; n],
            levels: vec![0; n * (n + 1) * words],
            depth: vec![0; n],
            visited: vec![0; words],
            frontier: vec![0; 2 * words],
            touched: vec![0; words],
        }
    }

    fn row(&self, u: NodeId) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    fn level(&self, s: NodeId, d: usize) -> &[u64] {
        let base = s * (self.n + 1) * self.words;
        &self.levels[base + d * self.words..base + (d + 1) * self.words]
    }

    fn remove_edge(&mut self, u: NodeId, v: NodeId) {
        let w = self.words;
        self.adj[u * w + v / 64] &= !(1 << (v % 64));
        self.adj[v * w + u / 64] &= !(1 << (u % 64));
    }

    /// Marks the nodes reachable from `start` in `visited`.
    fn reach(&mut self, start: NodeId) {
        let w = self.words;
        let (cur, next) = self.frontier.split_at_mut(w);
        self.visited.fill(0);
        self.visited[start / 64] |= 1 << (start % 64);
        cur.copy_from_slice(&self.visited);
        loop {
            next.fill(0);
            for_each_common_bit(cur, cur, |u| {
                for (x, a) in next.iter_mut().zip(&self.adj[u * w..(u + 1) * w]) {
                    *x |= a;
                }
            });
            let mut any = false;
            for (x, seen) in next.iter_mut().zip(self.visited.iter_mut()) {
                *x &= !*seen;
                *seen |= *x;
                any |= *x != 0;
            }
            if !any {
                return;
            }
            cur.copy_from_slice(next);
        }
    }

    /// Full single-source pass from `s`: BFS, then the backward sweep adding
    /// one half per ordered pair to the edges on its shortest paths.
    fn accumulate(&mut self, s: NodeId, scores: &mut [f64]) {
        match self.words {
            1 => self.forward(Fixed::<1>, s),
            2 => self.forward(Fixed::<2>, s),
            w => self.forward(w, s),
        }
        // every reached node but `s` is a target
        let mut all = core::mem::take(&mut self.frontier);
        all[..self.words].copy_from_slice(&self.visited);
        all[s / 64] &= !(1 << (s % 64));
        self.backward(s, scores, 1.0, &all[..self.words]);
        self.frontier = all;
    }

    #[inline(always)]
    fn forward(&mut self, width: impl Width, s: NodeId) {
        let (n, w) = (self.n, width.get());
        let Brandes { adj, dist, sigma, levels, visited, .. } = self;
        let sigma = &mut sigma[s * n..(s + 1) * n];
        let dist = &mut dist[s * n..(s + 1) * n];
        let levels = &mut levels[s * (n + 1) * w..(s + 1) * (n + 1) * w];
        visited.fill(0);
        visited[s / 64] |= 1 << (s % 64);
        levels[..w].fill(0);
        levels[s / 64] |= 1 << (s % 64);
        sigma[s] = 1.0;
        dist[s] = 0;

        let mut depth = 0;
        loop {
            let (done, rest) = levels.split_at_mut((depth + 1) * w);
            let prev = &done[depth * w..];
            let next = &mut rest[..w];
            next.fill(0);
            for_each_common_bit(prev, prev, |u| {
                for (k, x) in next.iter_mut().enumerate() {
                    *x |= adj[u * w + k];
                }
            });
            let mut any = false;
            for (x, seen) in next.iter_mut().zip(visited.iter_mut()) {
                *x &= !*seen;
                *seen |= *x;
                any |= *x != 0;
            }
            if !any {
                break;
            }
            depth += 1;
            for_each_common_bit(next, next, |v| {
                let mut total = 0.0;
                for_each_common_bit(&adj[v * w..(v + 1) * w], prev, |u| total += sigma[u]);
                sigma[v] = total;
                dist[v] = depth;
            });
        }
        self.depth[s] = depth;
    }

    /// Backward sweep over the current levels of source `s`, adding `sign`
    /// times the contributions of the pairs `(s, t)` for every `t` in
    /// `targets`. Only targets and their ancestors are visited.
    fn backward(&mut self, s: NodeId, scores: &mut [f64], sign: f64, targets: &[u64]) {
        match self.words {
            1 => self.backward_with(Fixed::<1>, s, scores, sign, targets),
            2 => self.backward_with(Fixed::<2>, s, scores, sign, targets),
            w => self.backward_with(w, s, scores, sign, targets),
        }
    }

    #[inline(always)]
    fn backward_with(&mut self, width: impl Width, s: NodeId, scores: &mut [f64], sign: f64, targets: &[u64]) {
        let (n, w) = (self.n, width.get());
        let Brandes { adj, sigma, delta, levels, depth, touched, .. } = self;
        let sigma = &sigma[s * n..(s + 1) * n];
        let levels = &levels[s * (n + 1) * w..(s + 1) * (n + 1) * w];
        let depth = depth[s];
        let targets = &targets[..w];
        let touched = &mut touched[..w];
        touched.fill(0);
        let half = sign * 0.5;
        for d in (1..=depth).rev() {
            let prev = &levels[(d - 1) * w..d * w];
            let here = &levels[d * w..(d + 1) * w];
            for k in 0..w {
                let mut m = (targets[k] | touched[k]) & here[k];
                while m != 0 {
                    let bit = m.trailing_zeros() as usize;
                    m &= m - 1;
                    let x = k * 64 + bit;
                    let own = (targets[k] >> bit & 1) as f64;
                    let coeff = (own + delta[x]) / sigma[x];
                    let out = &mut scores[x * n..(x + 1) * n];
                    for (j, (&a, &p)) in adj[x * w..(x + 1) * w].iter().zip(prev).enumerate() {
                        let mut preds = a & p;
                        touched[j] |= preds;
                        while preds != 0 {
                            let v = j * 64 + preds.trailing_zeros() as usize;
                            preds &= preds - 1;
                            let c = sigma[v] * coeff;
                            out[v] += half * c;
                            delta[v] += c;
                        }
                    }
                }
            }
        }
        for_each_common_bit(touched, touched, |v| delta[v] = 0.0);
    }

    /// `b` (at distance `db`) and its descendants in the current levels,
    /// written to `out`.
    fn descendants(&self, s: NodeId, b: NodeId, db: usize, out: &mut [u64], scratch: &mut [u64]) {
        out.fill(0);
        out[b / 64] |= 1 << (b % 64);
        for d in db + 1..=self.depth[s] {
            scratch.fill(0);
            for_each_common_bit(self.level(s, d - 1), out, |y| {
                for (a, r) in scratch.iter_mut().zip(self.row(y)) {
                    *a |= r;
                }
            });
            let mut any = false;
            for ((o, a), l) in out.iter_mut().zip(scratch.iter()).zip(self.level(s, d)) {
                *o |= a & l;
                any |= a & l != 0;
            }
            if !any {
                break;
            }
        }
    }

    /// Recomputes path counts from `s` for the nodes in `targets`, in level
    /// order; all other counts are unchanged.
    fn recount(&mut self, s: NodeId, targets: &[u64]) {
        let (n, w) = (self.n, self.words);
        let Brandes { adj, sigma, levels, depth, .. } = self;
        let levels = &levels[s * (n + 1) * w..(s + 1) * (n + 1) * w];
        let sigma = &mut sigma[s * n..(s + 1) * n];
        for d in 1..=depth[s] {
            let prev = &levels[(d - 1) * w..d * w];
            let here = &levels[d * w..(d + 1) * w];
            for_each_common_bit(targets, here, |x| {
                let mut total = 0.0;
                for_each_common_bit(&adj[x * w..(x + 1) * w], prev, |u| total += sigma[u]);
                sigma[x] = total;
            });
        }
    }

    /// Re-derives the levels and path counts of `targets` from `s`, whose
    /// distances can only have grown. Nodes outside `targets` keep both;
    /// targets that became unreachable drop out of all levels.
    fn relevel(&mut self, s: NodeId, targets: &[u64], from: usize) {
        let (n, w) = (self.n, self.words);
        let Brandes { adj, dist, sigma, levels, depth, frontier, .. } = self;
        let levels = &mut levels[s * (n + 1) * w..(s + 1) * (n + 1) * w];
        let dist = &mut dist[s * n..(s + 1) * n];
        let sigma = &mut sigma[s * n..(s + 1) * n];
        let old = depth[s];
        let mut top = 0;
        for d in 0..=old {
            let mut any = false;
            for (l, t) in levels[d * w..(d + 1) * w].iter_mut().zip(targets) {
                *l &= !t;
                any |= *l != 0;
            }
            if any {
                top = d;
            }
        }
        let (pending, placed) = frontier.split_at_mut(w);
        pending.copy_from_slice(targets);
        let mut d = from;
        while d <= top + 1 {
            if d > old {
                levels[d * w..(d + 1) * w].fill(0);
            }
            placed.fill(0);
            let (above, here) = levels.split_at_mut(d * w);
            let prev = &above[(d - 1) * w..];
            for_each_common_bit(pending, pending, |y| {
                let mut total = 0.0;
                for_each_common_bit(&adj[y * w..(y + 1) * w], prev, |p| total += sigma[p]);
                if total > 0.0 {
                    placed[y / 64] |= 1 << (y % 64);
                    dist[y] = d;
                    sigma[y] = total;
                }
            });
            let mut left = false;
            for ((p, q), l) in pending.iter_mut().zip(placed.iter()).zip(&mut here[..w]) {
                *l |= q;
                *p &= !q;
                left |= *p != 0;
            }
            if placed.iter().any(|&q| q != 0) {
                top = top.max(d);
            }
            if !left {
                break;
            }
            d += 1;
        }
        for_each_common_bit(pending, pending, |y| dist[y] = usize::MAX);
        depth[s] = top;
    }
}

/// A source for which only the pairs ending in `targets` change.
struct LocalUpdate {
    source: NodeId,
    targets: Vec<u64>,
    /// Set when the targets may have moved to deeper levels: the shallowest
    /// level any of them can land on.
    relevel_from: Option<usize>,
}

/// Working state of the divisive algorithm: the shrinking graph and the
/// betweenness of its remaining edges.
struct Divisive {
    scores: Vec<f64>,
    brandes: Brandes,
    comp: Vec<u64>,
    scratch: Vec<u64>,
    local: Vec<LocalUpdate>,
    /// Recycled target buffers.
    spare: Vec<LocalUpdate>,
}

impl Divisive {
    fn new(graph: &UndirectedGraph) -> Self {
        let n = graph.node_count();
        let mut scores = vec![0.0; n * n];
        let mut brandes = Brandes::new(graph);
        for s in 0..n {
            brandes.accumulate(s, &mut scores);
        }
        let words = brandes.words;
        Divisive {
            scores,
            brandes,
            comp: vec![0; words],
            scratch: vec![0; words],
            local: Vec::new(),
            spare: Vec::new(),
        }
    }

    /// Connected components of the remaining graph, each sorted, ordered by
    /// smallest member.
    fn components(&mut self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![0u64; self.brandes.words];
        let mut out = Vec::new();
        for s in 0..self.brandes.n {
            if has_bit(&seen, s) {
                continue;
            }
            self.brandes.reach(s);
            let mut comp = Vec::new();
            for_each_common_bit(&self.brandes.visited, &self.brandes.visited, |x| comp.push(x));
            for (a, b) in seen.iter_mut().zip(&self.brandes.visited) {
                *a |= b;
            }
            out.push(comp);
        }
        out
    }

    /// Highest-betweenness edge; ties go to the lexicographically smallest.
    fn select(&self) -> Option<(NodeId, NodeId)> {
        let n = self.brandes.n;
        let (mut best, mut top) = (None, f64::NEG_INFINITY);
        for u in 0..n {
            // neighbours above `u` only
            let first = u / 64;
            let row = &self.brandes.row(u)[first..];
            for (k, &word) in row.iter().enumerate() {
                let mut m = if k == 0 { word & (!0u64).checked_shl(u as u32 % 64 + 1).unwrap_or(0) } else { word };
                while m != 0 {
                    let v = (first + k) * 64 + m.trailing_zeros() as usize;
                    m &= m - 1;
                    let b = self.scores[u * n + v] + self.scores[v * n + u];
                    if b > top + BETWEENNESS_TIE_EPS {
                        (best, top) = (Some((u, v)), b);
                    }
                }
            }
        }
        best
    }

    /// Removes the top edge and refreshes betweenness.
    ///
    /// Sources at equal distance from both endpoints never routed through
    /// the edge and keep their share. For every other source, only the pairs
    /// ending at the far endpoint `b` or below it in the shortest-path DAG
    /// can change: those are withdrawn, the path counts (and, if `b` lost its
    /// only predecessor, the distances) of that subtree are redone, and the
    /// pairs are added back. Returns the removed edge and whether it split a
    /// component.
    fn remove_top(&mut self) -> Option<((NodeId, NodeId), bool)> {
        let (u, v) = self.select()?;
        let n = self.brandes.n;
        self.brandes.reach(u);
        self.comp.copy_from_slice(&self.brandes.visited);

        let mut spare = core::mem::take(&mut self.spare);
        let mut local = core::mem::take(&mut self.local);
        spare.append(&mut local);
        let comp = core::mem::take(&mut self.comp);
        for_each_common_bit(&comp, &comp, |s| {
            let (du, dv) = (self.brandes.dist[s * n + u], self.brandes.dist[s * n + v]);
            if du == dv {
                return;
            }
            let (a, b, db) = if du < dv { (u, v, dv) } else { (v, u, du) };
            let mut moved = true;
            for_each_common_bit(self.brandes.row(b), self.brandes.level(s, db - 1), |p| moved &= p == a);
            let mut targets = spare.pop().map(|l| l.targets).unwrap_or_else(|| vec![0; comp.len()]);
            self.brandes.descendants(s, b, db, &mut targets, &mut self.scratch);
            self.brandes.backward(s, &mut self.scores, -1.0, &targets);
            local.push(LocalUpdate { source: s, targets, relevel_from: moved.then_some(db) });
        });

        self.brandes.remove_edge(u, v);
        self.scores[u * n + v] = 0.0;
        self.scores[v * n + u] = 0.0;

        for l in &local {
            match l.relevel_from {
                Some(from) => self.brandes.relevel(l.source, &l.targets, from),
                None => self.brandes.recount(l.source, &l.targets),
            }
            self.brandes.backward(l.source, &mut self.scores, 1.0, &l.targets);
        }
        self.comp = comp;
        self.local = local;
        self.spare = spare;

        // seen from `u`, `v` just lost its only predecessor and was re-levelled
        let split = self.brandes.dist[u * n + v] == usize::MAX;
        Some(((u, v), split))
    }
}

/// Lazily enumerates Girvan–Newman candidate partitions.
///
/// The first item is the partition of the untouched graph; each following
/// item follows one more edge removal. The sequence ends after the last edge
/// is removed. Candidates are scored against the original graph.
pub struct GirvanNewman {
    original: UndirectedGraph,
    state: Divisive,
    current: Option<Partition>,
    started: bool,
}

impl GirvanNewman {
    pub fn new(graph: &UndirectedGraph) -> Self {
        GirvanNewman {
            original: graph.clone(),
            state: Divisive::new(graph),
            current: None,
            started: false,
        }
    }

    fn snapshot(&mut self) -> Partition {
        Partition::from_components(self.original.node_count(), self.state.components())
            .scored(&self.original)
    }
}

impl Iterator for GirvanNewman {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if !self.started {
            self.started = true;
            let p = self.snapshot();
            self.current = Some(p.clone());
            return Some(p);
        }
        let (_, split) = self.state.remove_top()?;
        if split {
            self.current = Some(self.snapshot());
        }
        self.current.clone()
    }
}

/// All candidate partitions produced by successive edge removals.
pub fn girvan_newman_partitions(graph: &UndirectedGraph) -> GirvanNewman {
    GirvanNewman::new(graph)
}

/// Selection rules for [`best_partition_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringOptions {
    /// A candidate made of one cluster holding more than this fraction of all
    /// nodes is only chosen when no other candidate has any cluster.
    pub max_single_cluster_fraction: f64,
}

impl Default for ClusteringOptions {
    fn default() -> Self {
        ClusteringOptions {
            max_single_cluster_fraction: 0.9,
        }
    }
}

impl ClusteringOptions {
    fn is_trivial(&self, p: &Partition) -> bool {
        let n = p.node_count();
        p.clusters().len() == 1
            && (p.clusters()[0].len() as f64) > self.max_single_cluster_fraction * n as f64
    }
}

/// Highest-quality Girvan–Newman candidate under the default options.
pub fn best_partition(graph: &UndirectedGraph) -> Partition {
    best_partition_with(graph, &ClusteringOptions::default())
}

/// Highest-quality candidate. Candidates without clusters are skipped; if
/// none has a cluster the all-unclustered partition (quality `None`) is
/// returned. Earlier candidates win exact ties.
pub fn best_partition_with(graph: &UndirectedGraph, opts: &ClusteringOptions) -> Partition {
    let n = graph.node_count();
    let mut best: Option<Partition> = None;
    let mut best_trivial: Option<Partition> = None;

    let mut consider = |p: Partition| {
        let Some(q) = p.quality() else { return };
        let slot = if opts.is_trivial(&p) {
            &mut best_trivial
        } else {
            &mut best
        };
        if slot.as_ref().and_then(Partition::quality).map_or(true, |b| q > b) {
            *slot = Some(p);
        }
    };

    let mut state = Divisive::new(graph);
    let comps = state.components();
    let mut any_large = comps.iter().any(|c| c.len() > MAX_NON_CLUSTER_SIZE);
    consider(Partition::from_components(n, comps).scored(graph));

    while any_large {
        match state.remove_top() {
            None => break,
            Some((_, false)) => {}
            Some((_, true)) => {
                let comps = state.components();
                any_large = comps.iter().any(|c| c.len() > MAX_NON_CLUSTER_SIZE);
                consider(Partition::from_components(n, comps).scored(graph));
            }
        }
    }

    best.or(best_trivial).unwrap_or_else(|| Partition::unclustered(n))
}
