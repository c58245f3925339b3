//! The extremal graphs `A(n,k,δ)`, `M_k(n)`, `L_k(n)` and the removed-edge
//! families built from `A(n,k,δ)`.
//!
//! Canonical vertex layout of `A(n,k,δ) = K_{k-1} ∨ (K_{δ-k+2} ∪ K_{n-δ-1})`:
//! `Y = 0..k-1`, then `X` (`δ-k+2` vertices), then `Z` (`n-δ-1` vertices).

use crate::graph::{complete, disjoint_union, empty, join, Graph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtremalError {
    #[error("need delta >= k >= {min_k} and n > delta + 1, got (n, k, delta) = ({n}, {k}, {delta})")]
    InvalidParams { n: usize, k: usize, delta: usize, min_k: usize },
    #[error("removed edge {0}-{1} does not have both endpoints in Y ∪ Z")]
    EdgeOutsideYz(usize, usize),
    #[error("removed edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("{got} removed edges exceed the family limit {max}")]
    TooManyEdges { got: usize, max: usize },
    #[error("construction {name} needs {requirement}")]
    ConstructionRange { name: &'static str, requirement: String },
}

/// `(n, k, δ)` with `δ ≥ k ≥ 2` and `n > δ + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
}

impl ExtremalParams {
    pub fn new(n: usize, k: usize, delta: usize) -> Result<Self, ExtremalError> {
        if k < 2 || delta < k || n <= delta + 1 {
            return Err(ExtremalError::InvalidParams { n, k, delta, min_k: 2 });
        }
        Ok(ExtremalParams { n, k, delta })
    }

    pub fn x_size(&self) -> usize {
        self.delta - self.k + 2
    }

    pub fn y_size(&self) -> usize {
        self.k - 1
    }

    pub fn z_size(&self) -> usize {
        self.n - self.delta - 1
    }

    /// Largest `|E'|` in the first family: `⌊(δ-k+2)(k-1)/4⌋`.
    pub fn family_bound(&self) -> usize {
        self.x_size() * self.y_size() / 4
    }

    /// Degree of a `Z` vertex in the intact graph: `n - δ + k - 3`.
    pub fn z_degree(&self) -> usize {
        self.n - self.delta + self.k - 3
    }

    fn z_start(&self) -> usize {
        self.y_size() + self.x_size()
    }

    fn in_yz(&self, v: usize) -> bool {
        v < self.y_size() || (v >= self.z_start() && v < self.n)
    }
}

/// `F(k,δ) = (k²+2k-3)δ² - (2k³-k²-17k+8)δ + k⁴-3k³-8k²+23k+4`, for `δ ≥ k ≥ 3`.
pub fn threshold_f(k: i128, delta: i128) -> Result<i128, ExtremalError> {
    if k < 3 || delta < k {
        return Err(ExtremalError::InvalidParams {
            n: 0,
            k: k.max(0) as usize,
            delta: delta.max(0) as usize,
            min_k: 3,
        });
    }
    Ok((k * k + 2 * k - 3) * delta * delta - (2 * k * k * k - k * k - 17 * k + 8) * delta + k.pow(4)
        - 3 * k.pow(3)
        - 8 * k * k
        + 23 * k
        + 4)
}

/// `2(n - δ + k - 3)`.
pub fn q_threshold(p: &ExtremalParams) -> i64 {
    2 * (p.n as i64 - p.delta as i64 + p.k as i64 - 3)
}

/// The classes of `A(n,k,δ)` and the degree refinement of `Y` and `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    /// `Y` vertices adjacent to everything.
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
    /// `Z` vertices keeping the intact degree `n - δ + k - 3`.
    pub z1: Vec<usize>,
    pub z2: Vec<usize>,
}

impl VertexPartition {
    /// The canonical layout, refined by the degrees of `g`.
    fn canonical(p: &ExtremalParams, g: &Graph) -> Self {
        let y: Vec<usize> = (0..p.y_size()).collect();
        let x: Vec<usize> = (p.y_size()..p.z_start()).collect();
        let z: Vec<usize> = (p.z_start()..p.n).collect();
        let (y1, y2) = y.iter().partition(|&&v| g.degree(v) == p.n - 1);
        let (z1, z2) = z.iter().partition(|&&v| g.degree(v) == p.z_degree());
        VertexPartition { x, y, z, y1, y2, z1, z2 }
    }
}

/// `A(n,k,δ)` in the canonical layout.
pub fn build_a(p: &ExtremalParams) -> (Graph, VertexPartition) {
    let g = join(
        &complete(p.y_size()),
        &disjoint_union(&complete(p.x_size()), &complete(p.z_size())),
    );
    let part = VertexPartition::canonical(p, &g);
    (g, part)
}

/// `M_k(n) = K_k ∨ (K_{n-2k} ∪ K̄_k)` for `k > 1`, `n > 2k + 1`.
pub fn build_m(n: usize, k: usize) -> Result<Graph, ExtremalError> {
    if k < 2 || n <= 2 * k + 1 {
        return Err(ExtremalError::ConstructionRange {
            name: "M_k(n)",
            requirement: format!("k > 1 and n > 2k + 1, got n = {n}, k = {k}"),
        });
    }
    Ok(join(&complete(k), &disjoint_union(&complete(n - 2 * k), &empty(k))))
}

/// `L_k(n) = K_1 ∨ (K_{n-k-1} ∪ K_k)` for `k ≥ 1`, `n ≥ k + 2`.
pub fn build_l(n: usize, k: usize) -> Result<Graph, ExtremalError> {
    if k < 1 || n < k + 2 {
        return Err(ExtremalError::ConstructionRange {
            name: "L_k(n)",
            requirement: format!("k ≥ 1 and n ≥ k + 2, got n = {n}, k = {k}"),
        });
    }
    Ok(join(&complete(1), &disjoint_union(&complete(n - k - 1), &complete(k))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyClass {
    /// `|E'| ≤ ⌊(δ-k+2)(k-1)/4⌋`.
    A1,
    /// `|E'| = ⌊(δ-k+2)(k-1)/4⌋ + 1`.
    A2,
    /// Spanning subgraph of `A(n,k,δ)` beyond both families (permissive mode only).
    Subgraph,
}

/// `A(n,k,δ) - E'` in the canonical layout.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    pub params: ExtremalParams,
    pub removed_edges: Vec<(usize, usize)>,
    pub family_class: FamilyClass,
    pub partition: VertexPartition,
    #[serde(skip)]
    pub graph: Graph,
    /// `labels[c]` is the input vertex placed at canonical position `c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    pub connected: bool,
    pub min_degree: usize,
}

impl FamilyMember {
    /// Connected with minimum degree at least `δ`.
    pub fn hypotheses_hold(&self) -> bool {
        self.connected && self.min_degree >= self.params.delta
    }

    fn from_graph(p: ExtremalParams, graph: Graph, removed: Vec<(usize, usize)>, labels: Option<Vec<usize>>) -> Self {
        let bound = p.family_bound();
        let family_class = match removed.len() {
            r if r <= bound => FamilyClass::A1,
            r if r == bound + 1 => FamilyClass::A2,
            _ => FamilyClass::Subgraph,
        };
        FamilyMember {
            params: p,
            partition: VertexPartition::canonical(&p, &graph),
            connected: graph.is_connected(),
            min_degree: graph.min_degree(),
            removed_edges: removed,
            family_class,
            graph,
            labels,
        }
    }
}

/// `A(n,k,δ) - E'` with every removed edge inside `Y ∪ Z`.
pub fn make_member(p: &ExtremalParams, removed: &[(usize, usize)]) -> Result<FamilyMember, ExtremalError> {
    let max = p.family_bound() + 1;
    if removed.len() > max {
        return Err(ExtremalError::TooManyEdges { got: removed.len(), max });
    }
    let (mut g, _) = build_a(p);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(removed.len());
    for &(a, b) in removed {
        let (u, v) = (a.min(b), a.max(b));
        if u == v || !p.in_yz(u) || !p.in_yz(v) {
            return Err(ExtremalError::EdgeOutsideYz(a, b));
        }
        if !seen.insert((u, v)) {
            return Err(ExtremalError::DuplicateEdge(a, b));
        }
        g.remove_edge(u, v);
        edges.push((u, v));
    }
    edges.sort_unstable();
    Ok(FamilyMember::from_graph(*p, g, edges, None))
}

/// One orbit of removed-edge sets under permutations of `Y` and of `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrbit {
    pub edges: Vec<(usize, usize)>,
    /// Number of edge sets in the orbit.
    pub orbit_size: u128,
    /// Stabiliser order of the representative on its support.
    pub automorphisms: u64,
}

// Typed vertex: Y vertices are plain indices, Z vertices carry this tag bit.
const Z_TAG: u32 = 1 << 16;

fn permute_partial(n: u128, r: u128) -> u128 {
    (0..r).map(|i| n - i).product()
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Minimum relabelled edge list over type-preserving relabellings of the
/// support, and the number of relabellings attaining it.
fn canonical_config(config: &[(u32, u32)]) -> (Vec<(u32, u32)>, u64) {
    let mut degree: BTreeMap<u32, usize> = BTreeMap::new();
    for &(a, b) in config {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    // Cells of vertices sharing (type, degree); labels are handed out cell by cell.
    let mut cells: BTreeMap<(bool, usize), Vec<u32>> = BTreeMap::new();
    for (&v, &d) in &degree {
        cells.entry((v & Z_TAG != 0, d)).or_default().push(v);
    }
    let cells: Vec<(bool, Vec<u32>)> = cells.into_iter().map(|((z, _), vs)| (z, vs)).collect();
    let mut orders: Vec<Vec<usize>> = cells.iter().map(|(_, vs)| (0..vs.len()).collect()).collect();
    let mut best: Option<Vec<(u32, u32)>> = None;
    let mut hits = 0u64;
    loop {
        let mut label: BTreeMap<u32, u32> = BTreeMap::new();
        let (mut next_y, mut next_z) = (0u32, Z_TAG);
        for ((is_z, vs), order) in cells.iter().zip(&orders) {
            for &i in order {
                let slot = if *is_z { &mut next_z } else { &mut next_y };
                label.insert(vs[i], *slot);
                *slot += 1;
            }
        }
        let mut image: Vec<(u32, u32)> = config
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (label[&a], label[&b]);
                (x.min(y), x.max(y))
            })
            .collect();
        image.sort_unstable();
        match &best {
            Some(b) if image > *b => {}
            Some(b) if image == *b => hits += 1,
            _ => {
                best = Some(image);
                hits = 1;
            }
        }
        // Advance the mixed-radix permutation counter.
        let mut advanced = false;
        for order in orders.iter_mut() {
            if next_permutation(order) {
                advanced = true;
                break;
            }
            order.sort_unstable();
        }
        if !advanced {
            break;
        }
    }
    (best.unwrap_or_default(), hits)
}

/// Orbit representatives of `size`-edge subsets of the pairs inside `Y ∪ Z`,
/// for classes of sizes `y` and `z`, in the compact layout `Y = 0..y`,
/// `Z = y..y+z`. Sorted by canonical form.
pub fn orbit_representatives(y: usize, z: usize, size: usize) -> Vec<EdgeOrbit> {
    let mut layer: BTreeMap<Vec<(u32, u32)>, u64> = BTreeMap::new();
    layer.insert(Vec::new(), 1);
    for _ in 0..size {
        let mut next: BTreeMap<Vec<(u32, u32)>, u64> = BTreeMap::new();
        for config in layer.keys() {
            let support: BTreeSet<u32> = config.iter().flat_map(|&(a, b)| [a, b]).collect();
            let used_y = support.iter().filter(|&&v| v & Z_TAG == 0).count() as u32;
            let used_z = support.len() as u32 - used_y;
            let mut candidates: Vec<u32> = support.iter().copied().collect();
            candidates.extend((used_y..(used_y + 2).min(y as u32)).map(|i| i));
            candidates.extend((used_z..(used_z + 2).min(z as u32)).map(|i| Z_TAG | i));
            for (i, &a) in candidates.iter().enumerate() {
                for &b in &candidates[i + 1..] {
                    let e = (a.min(b), a.max(b));
                    if config.contains(&e) {
                        continue;
                    }
                    let mut grown = config.clone();
                    grown.push(e);
                    let (canon, aut) = canonical_config(&grown);
                    next.entry(canon).or_insert(aut);
                }
            }
        }
        layer = next;
    }
    let expand = |v: u32| -> usize {
        if v & Z_TAG == 0 {
            v as usize
        } else {
            y + (v & !Z_TAG) as usize
        }
    };
    layer
        .into_iter()
        .map(|(config, aut)| {
            let support: BTreeSet<u32> = config.iter().flat_map(|&(a, b)| [a, b]).collect();
            let sy = support.iter().filter(|&&v| v & Z_TAG == 0).count() as u128;
            let sz = support.len() as u128 - sy;
            EdgeOrbit {
                edges: config.iter().map(|&(a, b)| (expand(a), expand(b))).collect(),
                orbit_size: permute_partial(y as u128, sy) * permute_partial(z as u128, sz) / aut as u128,
                automorphisms: aut,
            }
        })
        .collect()
}

/// Orbit representatives of removed-edge sets of the given size, lifted to
/// the canonical layout of `A(n,k,δ)`.
pub fn enumerate_eprime_orbits(p: &ExtremalParams, size: usize) -> Result<Vec<EdgeOrbit>, ExtremalError> {
    let max = p.family_bound() + 1;
    if size > max {
        return Err(ExtremalError::TooManyEdges { got: size, max });
    }
    let shift = p.x_size();
    let y = p.y_size();
    let lift = |v: usize| if v < y { v } else { v + shift };
    Ok(orbit_representatives(y, p.z_size(), size)
        .into_iter()
        .map(|mut o| {
            o.edges = o.edges.iter().map(|&(a, b)| (lift(a), lift(b))).collect();
            o
        })
        .collect())
}

/// How `G ⊆ A(n,k,δ) - E'` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MembershipMode {
    /// `G ≅ A(n,k,δ) - E'` with `|E'|` within the second family's size.
    #[default]
    Strict,
    /// `G` isomorphic to any spanning subgraph of `A(n,k,δ)`.
    Permissive,
}

/// Largest order for the exhaustive placement search used when no vertex of
/// degree `δ` anchors the classes.
pub const PLACEMENT_SEARCH_MAX_ORDER: usize = 12;

/// Strict classification: `G ≅ A(n,k,δ) - E'` with `|E'| ≤ bound + 1`.
pub fn classify_membership(g: &Graph, k: usize, delta: usize) -> Option<FamilyMember> {
    classify_membership_with(g, k, delta, MembershipMode::Strict)
}

pub fn classify_membership_with(g: &Graph, k: usize, delta: usize, mode: MembershipMode) -> Option<FamilyMember> {
    let p = ExtremalParams::new(g.order(), k, delta).ok()?;
    let (a, _) = build_a(&p);
    let s = p.x_size();
    let closed = |v: usize| -> Vec<u64> {
        let mut r = g.row(v).to_vec();
        r[v / 64] |= 1 << (v % 64);
        r
    };
    let mut placement = None;
    // An X vertex of A - E' has closed neighbourhood exactly X ∪ Y, so X sits
    // among the closed twins of any degree-δ vertex.
    for x in (0..p.n).filter(|&v| g.degree(v) == delta) {
        let nx = closed(x);
        let twins: Vec<usize> = crate::graph::BitIter::over(&nx).filter(|&v| closed(v) == nx).collect();
        if twins.len() >= s {
            let xs: Vec<usize> = twins[..s].to_vec();
            let ys: Vec<usize> = crate::graph::BitIter::over(&nx).filter(|v| !xs.contains(v)).collect();
            placement = Some((ys, xs));
            break;
        }
    }
    if placement.is_none() && mode == MembershipMode::Permissive && p.n <= PLACEMENT_SEARCH_MAX_ORDER {
        placement = search_placement(g, &p);
    }
    let (ys, xs) = placement?;
    let mut labels = ys;
    labels.extend(&xs);
    let placed: BTreeSet<usize> = labels.iter().copied().collect();
    labels.extend((0..p.n).filter(|v| !placed.contains(v)));
    let mut perm = vec![0; p.n];
    for (c, &v) in labels.iter().enumerate() {
        perm[v] = c;
    }
    let h = g.relabel(&perm);
    if h.edges().any(|(u, v)| !a.has_edge(u, v)) {
        return None;
    }
    let removed: Vec<(usize, usize)> = a.edges().filter(|&(u, v)| !h.has_edge(u, v)).collect();
    if mode == MembershipMode::Strict && (removed.len() > p.family_bound() + 1 || removed.iter().any(|&(u, v)| !p.in_yz(u) || !p.in_yz(v))) {
        return None;
    }
    Some(FamilyMember::from_graph(p, h, removed, Some(labels)))
}

/// Any `Y` of size `k-1` and `X` of size `δ-k+2` with no edges between `X`
/// and the remaining vertices.
fn search_placement(g: &Graph, p: &ExtremalParams) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = p.n;
    let (ny, nx) = (p.y_size(), p.x_size());
    for ymask in 0u32..(1 << n) {
        if ymask.count_ones() as usize != ny {
            continue;
        }
        let rest = ((1u32 << n) - 1) & !ymask;
        let mut xmask = rest;
        while xmask != 0 {
            xmask = (xmask - 1) & rest;
            if xmask.count_ones() as usize != nx {
                continue;
            }
            let zmask = rest & !xmask;
            let isolated = (0..n)
                .filter(|&v| xmask >> v & 1 == 1)
                .all(|v| g.row(v)[0] as u32 & zmask == 0);
            if isolated && zmask != 0 {
                let bits = |m: u32| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>();
                return Some((bits(ymask), bits(xmask)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, petersen};

    fn params(n: usize, k: usize, delta: usize) -> ExtremalParams {
        ExtremalParams::new(n, k, delta).unwrap()
    }

    #[test]
    fn threshold_values() {
        assert_eq!(threshold_f(3, 3).unwrap(), 103);
        assert_eq!(threshold_f(3, 4).unwrap(), 185);
        // Independent expansion: 21·16 - 52·4 + (256 - 192 - 128 + 92 + 4).
        assert_eq!(threshold_f(4, 4).unwrap(), 336 - 208 + 32);
        assert_eq!(threshold_f(4, 4).unwrap(), 160);
        assert!(threshold_f(2, 3).is_err());
        assert!(threshold_f(4, 3).is_err());
        assert_eq!(q_threshold(&params(103, 3, 3)), 200);
        assert_eq!(q_threshold(&params(10, 3, 4)), 12);
        assert_eq!(q_threshold(&params(50, 4, 4)), 2 * 47);
    }

    #[test]
    fn f_is_increasing_in_delta() {
        for k in 3..=10i128 {
            for d in k..=10 {
                assert!(threshold_f(k, d + 1).unwrap() > threshold_f(k, d).unwrap(), "k={k} δ={d}");
            }
        }
    }

    #[test]
    fn intact_a_degrees_and_edges() {
        let p = params(10, 3, 4);
        let (g, part) = build_a(&p);
        // K_2 ∨ (K_3 ∪ K_5): 1 + 3 + 10 + 2·8.
        assert_eq!(g.edge_count(), 30);
        assert_eq!(part.y, vec![0, 1]);
        assert_eq!(part.x, vec![2, 3, 4]);
        assert_eq!(part.z, (5..10).collect::<Vec<_>>());
        for p in [params(10, 3, 4), params(103, 3, 3), params(185, 3, 4), params(40, 4, 6)] {
            let (g, part) = build_a(&p);
            assert!(part.x.iter().all(|&v| g.degree(v) == p.delta));
            assert!(part.y.iter().all(|&v| g.degree(v) == p.n - 1));
            assert!(part.z.iter().all(|&v| g.degree(v) == p.z_degree()));
            assert_eq!((part.y1.len(), part.y2.len()), (p.y_size(), 0));
            assert_eq!((part.z1.len(), part.z2.len()), (p.z_size(), 0));
        }
        assert!(ExtremalParams::new(5, 3, 4).is_err());
        assert!(ExtremalParams::new(10, 4, 3).is_err());
    }

    #[test]
    fn m_and_l_constructions() {
        let m = build_m(7, 2).unwrap();
        assert_eq!(m.edge_count(), 14);
        assert_eq!(m.min_degree(), 2);
        assert_eq!(build_m(12, 3).unwrap().min_degree(), 3);
        assert!(build_m(5, 2).is_err());
        assert_eq!(build_l(6, 2).unwrap().edge_count(), 9);
        assert!(build_l(3, 2).is_err());
    }

    #[test]
    fn members_and_errors() {
        let p = params(103, 3, 3);
        let m0 = make_member(&p, &[]).unwrap();
        assert_eq!(m0.family_class, FamilyClass::A1);
        assert!(m0.hypotheses_hold());
        let m1 = make_member(&p, &[(0, 1)]).unwrap();
        assert_eq!(m1.family_class, FamilyClass::A1);
        assert_eq!(m1.partition.y2, vec![0, 1]);
        let m2 = make_member(&p, &[(0, 4), (5, 4)]).unwrap();
        assert_eq!(m2.family_class, FamilyClass::A2);
        assert_eq!(m2.partition.z2, vec![4, 5]);
        assert_eq!(make_member(&p, &[(0, 2)]).unwrap_err(), ExtremalError::EdgeOutsideYz(0, 2));
        assert_eq!(make_member(&p, &[(4, 5), (5, 4)]).unwrap_err(), ExtremalError::DuplicateEdge(5, 4));
        assert!(matches!(make_member(&p, &[(4, 5), (5, 6), (6, 7)]), Err(ExtremalError::TooManyEdges { .. })));
    }

    #[test]
    fn classifier_examples() {
        let p = params(10, 3, 4);
        let (a, _) = build_a(&p);
        let m = classify_membership(&a, 3, 4).unwrap();
        assert!(m.removed_edges.is_empty());
        assert_eq!(m.family_class, FamilyClass::A1);
        let mut g = a.clone();
        g.remove_edge(7, 8);
        let m = classify_membership(&g, 3, 4).unwrap();
        assert_eq!((m.removed_edges.len(), m.family_class), (1, FamilyClass::A1));
        assert!(classify_membership(&petersen(), 3, 3).is_none());
        assert!(classify_membership(&cycle(8), 3, 3).is_none());
        // Scrambled labels still classify.
        let perm: Vec<usize> = (0..10).map(|v| (v * 3) % 10).collect();
        let m = classify_membership(&g.relabel(&perm), 3, 4).unwrap();
        assert_eq!(m.removed_edges.len(), 1);
        let labels = m.labels.unwrap();
        assert_eq!(g.relabel(&perm).relabel(&{
            let mut inv = vec![0; 10];
            for (c, &v) in labels.iter().enumerate() {
                inv[v] = c;
            }
            inv
        }), m.graph);
    }

    #[test]
    fn permissive_mode_accepts_sparser_subgraphs() {
        let p = params(8, 3, 3);
        let (a, _) = build_a(&p);
        let mut g = a.clone();
        for (u, v) in [(4, 5), (4, 6), (5, 7)] {
            g.remove_edge(u, v);
        }
        assert!(classify_membership(&g, 3, 3).is_none());
        let m = classify_membership_with(&g, 3, 3, MembershipMode::Permissive).unwrap();
        assert_eq!((m.removed_edges.len(), m.family_class), (3, FamilyClass::Subgraph));
        // An X vertex losing a neighbour needs the placement search.
        let mut h = a.clone();
        h.remove_edge(2, 3);
        let m = classify_membership_with(&h, 3, 3, MembershipMode::Permissive).unwrap();
        assert_eq!(m.family_class, FamilyClass::A1);
        assert!(classify_membership(&h, 3, 3).is_none());
    }

    #[test]
    fn orbit_counts_at_103_3_3() {
        let p = params(103, 3, 3);
        let size1 = enumerate_eprime_orbits(&p, 1).unwrap();
        assert_eq!(size1.len(), 3);
        let size2 = enumerate_eprime_orbits(&p, 2).unwrap();
        assert_eq!(size2.len(), 9);
        let pairs = 101u128 * 100 / 2;
        assert_eq!(size1.iter().map(|o| o.orbit_size).sum::<u128>(), pairs);
        assert_eq!(size2.iter().map(|o| o.orbit_size).sum::<u128>(), pairs * (pairs - 1) / 2);
        for o in size2 {
            assert!(make_member(&p, &o.edges).is_ok());
        }
        assert!(enumerate_eprime_orbits(&p, 3).is_err());
        assert_eq!(enumerate_eprime_orbits(&p, 0).unwrap().len(), 1);
    }

    /// Orbits found by closing each edge set under all permutations of Y and Z.
    fn brute_force_orbit_sizes(y: usize, z: usize, size: usize) -> Vec<u128> {
        let n = y + z;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut perms = Vec::new();
        let mut py: Vec<usize> = (0..y).collect();
        loop {
            let mut pz: Vec<usize> = (y..n).collect();
            loop {
                perms.push(py.iter().chain(&pz).copied().collect::<Vec<_>>());
                if !next_permutation(&mut pz) {
                    break;
                }
            }
            if !next_permutation(&mut py) {
                break;
            }
        }
        let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        let mut sizes = Vec::new();
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let config: Vec<(usize, usize)> = combo.iter().map(|&i| pairs[i]).collect();
            if !seen.contains(&config) {
                let mut orbit = BTreeSet::new();
                for perm in &perms {
                    let mut image: Vec<(usize, usize)> = config
                        .iter()
                        .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
                        .collect();
                    image.sort_unstable();
                    orbit.insert(image);
                }
                sizes.push(orbit.len() as u128);
                seen.extend(orbit);
            }
            // Next combination of `size` pair indices.
            let m = pairs.len();
            let Some(i) = (0..size).rev().find(|&i| combo[i] < m - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn orbit_census_matches_brute_force_on_shrunken_classes() {
        for (y, size) in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)] {
            let z = 5;
            let reps = orbit_representatives(y, z, size);
            let mut sizes: Vec<u128> = reps.iter().map(|o| o.orbit_size).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, brute_force_orbit_sizes(y, z, size), "y={y} size={size}");
            let pairs = ((y + z) * (y + z - 1) / 2) as u128;
            let total: u128 = (0..size as u128).fold(1, |acc, i| acc * (pairs - i) / (i + 1));
            assert_eq!(sizes.iter().sum::<u128>(), total);
        }
    }

    #[test]
    fn z1_is_nonempty_for_second_family_members() {
        for p in [params(103, 3, 3), params(185, 3, 4), params(160, 4, 4)] {
            for o in enumerate_eprime_orbits(&p, p.family_bound() + 1).unwrap() {
                let m = make_member(&p, &o.edges).unwrap();
                assert_eq!(m.family_class, FamilyClass::A2);
                assert!(!m.partition.z1.is_empty());
            }
        }
    }
}
