//! Vertex connectivity by unit-capacity flows on the vertex-split digraph.
//!
//! Each vertex `v` becomes `v_in → v_out` with capacity one; every edge `uv`
//! becomes `u_out → v_in` and `v_out → u_in` with unbounded capacity. The
//! maximum `s_out → t_in` flow counts internally disjoint `s–t` paths, and the
//! vertices whose `in` side is residual-reachable but whose `out` side is not
//! form a minimum separating set.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// Largest order accepted by [`brute_force_connectivity`].
pub const BRUTE_FORCE_MAX_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConnectivityError {
    #[error("brute-force oracle supports at most {BRUTE_FORCE_MAX_ORDER} vertices, got {0}")]
    OracleTooLarge(usize),
    #[error("vertices {0} and {1} must be distinct and non-adjacent")]
    AdjacentPair(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectivityMethod {
    MaxFlow,
    BruteForce,
}

/// Which non-adjacent pairs the flow search visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairStrategy {
    /// Every non-adjacent pair; the reference mode.
    #[default]
    Exhaustive,
    /// Sources restricted to the first `κ + 1` vertices (Even's argument).
    Pruned,
}

/// `κ(G)` with a minimum separating set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityResult {
    pub kappa: usize,
    /// Empty for complete, trivial, or disconnected graphs.
    pub cut: Vec<usize>,
    pub method: ConnectivityMethod,
    /// Components of `G - cut` when the cut is nonempty.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub components: Vec<Vec<usize>>,
}

impl ConnectivityResult {
    fn new(g: &Graph, kappa: usize, cut: Vec<usize>, method: ConnectivityMethod) -> Self {
        let components = if cut.is_empty() {
            Vec::new()
        } else {
            g.components_without(&cut)
        };
        ConnectivityResult {
            kappa,
            cut,
            method,
            components,
        }
    }
}

const BIG: i32 = i32::MAX / 4;

/// Dense residual network of the vertex-split digraph.
struct SplitNetwork<'a> {
    g: &'a Graph,
    nodes: usize,
    cap: Vec<i32>,
    parent: Vec<usize>,
    queue: Vec<usize>,
}

#[inline]
fn vin(v: usize) -> usize {
    2 * v
}

#[inline]
fn vout(v: usize) -> usize {
    2 * v + 1
}

impl<'a> SplitNetwork<'a> {
    fn new(g: &'a Graph) -> Self {
        let nodes = 2 * g.order();
        let mut net = SplitNetwork {
            g,
            nodes,
            cap: vec![0; nodes * nodes],
            parent: vec![usize::MAX; nodes],
            queue: Vec::with_capacity(nodes),
        };
        net.reset();
        net
    }

    fn reset(&mut self) {
        self.cap.iter_mut().for_each(|c| *c = 0);
        let nodes = self.nodes;
        for v in 0..self.g.order() {
            self.cap[vin(v) * nodes + vout(v)] = 1;
            for w in self.g.neighbors(v) {
                self.cap[vout(v) * nodes + vin(w)] = BIG;
            }
        }
    }

    #[inline]
    fn push(&mut self, a: usize, b: usize, amount: i32) {
        self.cap[a * self.nodes + b] -= amount;
        self.cap[b * self.nodes + a] += amount;
    }

    /// Residual BFS from `source`; returns whether `sink` was reached.
    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.parent.iter_mut().for_each(|p| *p = usize::MAX);
        self.parent[source] = source;
        self.queue.clear();
        self.queue.push(source);
        let mut head = 0;
        while head < self.queue.len() {
            let a = self.queue[head];
            head += 1;
            let row = &self.cap[a * self.nodes..(a + 1) * self.nodes];
            for (b, &c) in row.iter().enumerate() {
                if c > 0 && self.parent[b] == usize::MAX {
                    self.parent[b] = a;
                    if b == sink {
                        return true;
                    }
                    self.queue.push(b);
                }
            }
        }
        false
    }

    /// Maximum number of internally disjoint `s–t` paths, stopping once
    /// `limit` is reached. Returns the flow value and, when the flow is below
    /// `limit`, the separating set read off the final residual graph.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> (usize, Option<Vec<usize>>) {
        self.reset();
        let (source, sink) = (vout(s), vin(t));
        let mut flow = 0;
        // Paths of length two through common neighbours are disjoint; seed them.
        let common: Vec<usize> = crate::graph::BitIter::over(
            &self
                .g
                .row(s)
                .iter()
                .zip(self.g.row(t))
                .map(|(a, b)| a & b)
                .collect::<Vec<_>>(),
        )
        .collect();
        for w in common {
            if flow >= limit {
                return (flow, None);
            }
            self.push(source, vin(w), 1);
            self.push(vin(w), vout(w), 1);
            self.push(vout(w), sink, 1);
            flow += 1;
        }
        loop {
            if flow >= limit {
                return (flow, None);
            }
            if !self.bfs(source, sink) {
                break;
            }
            let mut b = sink;
            while b != source {
                let a = self.parent[b];
                self.push(a, b, 1);
                b = a;
            }
            flow += 1;
        }
        // `parent` now marks the residual-reachable set of the failed search.
        let cut: Vec<usize> = (0..self.g.order())
            .filter(|&v| self.parent[vin(v)] != usize::MAX && self.parent[vout(v)] == usize::MAX)
            .collect();
        debug_assert_eq!(cut.len(), flow);
        (flow, Some(cut))
    }

    /// Internally disjoint paths carried by the current flow.
    fn paths(&mut self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let n = self.g.order();
        let nodes = self.nodes;
        // flow[u][v] on arc u_out -> v_in, with opposite flows cancelled.
        let mut flow = vec![0i32; n * n];
        for u in 0..n {
            for v in self.g.neighbors(u) {
                flow[u * n + v] = BIG - self.cap[vout(u) * nodes + vin(v)];
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                let m = flow[u * n + v].min(flow[v * n + u]);
                flow[u * n + v] -= m;
                flow[v * n + u] -= m;
            }
        }
        let mut paths = Vec::new();
        for first in 0..n {
            while flow[s * n + first] > 0 {
                flow[s * n + first] -= 1;
                let mut path = vec![s, first];
                let mut cur = first;
                while cur != t {
                    let next = (0..n).find(|&w| flow[cur * n + w] > 0).expect("flow conservation");
                    flow[cur * n + next] -= 1;
                    path.push(next);
                    cur = next;
                }
                paths.push(path);
            }
        }
        paths
    }
}

/// Minimum `s–t` separator and a matching family of disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalConnectivity {
    pub paths: Vec<Vec<usize>>,
    pub cut: Vec<usize>,
}

/// Menger pair for distinct non-adjacent `s`, `t`, both read from one flow.
pub fn local_connectivity(g: &Graph, s: usize, t: usize) -> Result<LocalConnectivity, ConnectivityError> {
    for v in [s, t] {
        if v >= g.order() {
            return Err(ConnectivityError::VertexOutOfRange(v));
        }
    }
    if s == t || g.has_edge(s, t) {
        return Err(ConnectivityError::AdjacentPair(s, t));
    }
    let mut net = SplitNetwork::new(g);
    let (_, cut) = net.max_flow(s, t, usize::MAX);
    let paths = net.paths(s, t);
    Ok(LocalConnectivity {
        paths,
        cut: cut.expect("uncapped flow always yields a cut"),
    })
}

/// A minimum-degree vertex's neighbourhood: a separating set of size `δ`
/// whenever the graph is not complete.
fn min_degree_cut(g: &Graph) -> (usize, Vec<usize>) {
    let v = (0..g.order()).min_by_key(|&v| g.degree(v)).expect("nonempty graph");
    let cut: Vec<usize> = g.neighbors(v).collect();
    (cut.len(), cut)
}

fn is_complete(g: &Graph) -> bool {
    let n = g.order();
    g.edge_count() == n * n.saturating_sub(1) / 2
}

/// Exact `κ(G)`: `n - 1` for complete graphs, 0 for trivial or disconnected
/// ones, otherwise the minimum over non-adjacent pairs of the local connectivity.
pub fn vertex_connectivity(g: &Graph) -> ConnectivityResult {
    vertex_connectivity_with(g, PairStrategy::Exhaustive)
}

pub fn vertex_connectivity_with(g: &Graph, strategy: PairStrategy) -> ConnectivityResult {
    let n = g.order();
    if n <= 1 || !g.is_connected() {
        return ConnectivityResult::new(g, 0, Vec::new(), ConnectivityMethod::MaxFlow);
    }
    if is_complete(g) {
        return ConnectivityResult::new(g, n - 1, Vec::new(), ConnectivityMethod::MaxFlow);
    }
    let mut net = SplitNetwork::new(g);
    let (mut best, mut best_cut) = min_degree_cut(g);
    for s in 0..n {
        if strategy == PairStrategy::Pruned && s > best {
            break;
        }
        for t in s + 1..n {
            if g.has_edge(s, t) {
                continue;
            }
            let limit = match strategy {
                PairStrategy::Exhaustive => usize::MAX,
                PairStrategy::Pruned => best,
            };
            if let (flow, Some(cut)) = net.max_flow(s, t, limit) {
                if flow < best {
                    best = flow;
                    best_cut = cut;
                }
            }
        }
    }
    best_cut.sort_unstable();
    ConnectivityResult::new(g, best, best_cut, ConnectivityMethod::MaxFlow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KConnectivityReason {
    /// Flow certified at least `k` disjoint paths for every required pair.
    Certified,
    /// `n ≤ k`.
    TooFewVertices,
    Disconnected,
    /// A separating set with fewer than `k` vertices was found.
    SmallCut,
}

/// Outcome of a `κ(G) ≥ k` query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KConnectivity {
    pub k: usize,
    pub k_connected: bool,
    pub reason: KConnectivityReason,
    /// Separating set of size `< k` when one was found.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cut: Option<Vec<usize>>,
}

/// Whether `n > k` and `κ(G) ≥ k`, exiting at the first pair that admits a
/// separator of size below `k`.
pub fn is_k_connected(g: &Graph, k: usize) -> KConnectivity {
    let n = g.order();
    let verdict = |ok: bool, reason, cut| KConnectivity {
        k,
        k_connected: ok,
        reason,
        cut,
    };
    if n <= k {
        return verdict(false, KConnectivityReason::TooFewVertices, None);
    }
    if !g.is_connected() {
        return verdict(k == 0, KConnectivityReason::Disconnected, Some(Vec::new()));
    }
    if k == 0 || is_complete(g) {
        return verdict(true, KConnectivityReason::Certified, None);
    }
    let (delta, cut) = min_degree_cut(g);
    if delta < k {
        return verdict(false, KConnectivityReason::SmallCut, Some(cut));
    }
    let mut net = SplitNetwork::new(g);
    for s in 0..k.min(n) {
        for t in s + 1..n {
            if g.has_edge(s, t) {
                continue;
            }
            if let (_, Some(mut cut)) = net.max_flow(s, t, k) {
                cut.sort_unstable();
                return verdict(false, KConnectivityReason::SmallCut, Some(cut));
            }
        }
    }
    verdict(true, KConnectivityReason::Certified, None)
}

/// Exact `κ(G)` by trying vertex subsets in order of increasing size.
pub fn brute_force_connectivity(g: &Graph) -> Result<ConnectivityResult, ConnectivityError> {
    let n = g.order();
    if n > BRUTE_FORCE_MAX_ORDER {
        return Err(ConnectivityError::OracleTooLarge(n));
    }
    let method = ConnectivityMethod::BruteForce;
    if n <= 1 {
        return Ok(ConnectivityResult::new(g, 0, Vec::new(), method));
    }
    let adj: Vec<u32> = (0..n).map(|v| g.row(v)[0] as u32).collect();
    let full: u32 = (1 << n) - 1;
    let connected = |alive: u32| -> bool {
        if alive == 0 {
            return true;
        }
        let mut seen = alive & alive.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            next &= alive & !seen;
            seen |= next;
            frontier = next;
        }
        seen == alive
    };
    if !connected(full) {
        return Ok(ConnectivityResult::new(g, 0, Vec::new(), method));
    }
    for size in 1..n - 1 {
        for removed in 0u32..(1 << n) {
            if removed.count_ones() as usize != size {
                continue;
            }
            if !connected(full & !removed) {
                let cut: Vec<usize> = (0..n).filter(|&v| removed >> v & 1 == 1).collect();
                return Ok(ConnectivityResult::new(g, size, cut, method));
            }
        }
    }
    Ok(ConnectivityResult::new(g, n - 1, Vec::new(), method))
}

/// The classical degree condition `n ≥ k + 1` and `2δ ≥ n + k - 2`; sufficient, not necessary.
pub fn dirac_condition(g: &Graph, k: usize) -> bool {
    let n = g.order();
    n > k && 2 * g.min_degree() + 2 >= n + k
}

/// Edge-density test `m > n(n-1)/2 - (δ-k+3)(n-δ-2)` with its hypothesis flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub holds: bool,
    pub edge_count: i64,
    /// Right-hand side of the strict inequality.
    pub bound: i64,
    /// `δ ≥ k ≥ 2`.
    pub params_ok: bool,
    /// `n ≥ 2δ - k + 5`.
    pub order_ok: bool,
    pub connected: bool,
    /// `δ(G) ≥ delta`.
    pub min_degree_ok: bool,
    /// `δ(G) = delta`.
    pub min_degree_exact: bool,
}

impl DensityCheck {
    pub fn hypotheses_hold(&self) -> bool {
        self.params_ok && self.order_ok && self.connected && self.min_degree_exact
    }
}

pub fn density_condition(g: &Graph, k: usize, delta: usize) -> DensityCheck {
    let n = g.order() as i64;
    let (ki, di) = (k as i64, delta as i64);
    let bound = n * (n - 1) / 2 - (di - ki + 3) * (n - di - 2);
    let m = g.edge_count() as i64;
    let min_deg = g.min_degree();
    DensityCheck {
        holds: m > bound,
        edge_count: m,
        bound,
        params_ok: delta >= k && k >= 2,
        order_ok: n >= 2 * di - ki + 5,
        connected: g.is_connected(),
        min_degree_ok: min_deg >= delta,
        min_degree_exact: min_deg == delta,
    }
}
