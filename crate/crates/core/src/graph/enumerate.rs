//! Exhaustive enumeration of labelled graphs for small-order sweeps.
//!
//! The index space is split into fixed-size chunks that are processed in
//! parallel; results are concatenated in index order so every sweep is
//! deterministic regardless of scheduling.

use super::{Graph, GraphError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest order for which all `2^C(n,2)` labelled graphs are enumerated.
pub const MAX_UNRESTRICTED_ORDER: usize = 7;

/// Hard cap on the size of any enumerated index space.
const MAX_SPACE: u64 = 1 << 34;

const CHUNK: u64 = 1 << 14;

/// Which labelled graphs on `n` vertices are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationMode {
    /// Every labelled graph (`n ≤ 7`).
    All,
    /// Complete graph minus every set of at most this many edges.
    ComplementBudget(usize),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub emitted: u64,
    pub accepted: u64,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Vertex pairs in graph6 column order: (0,1), (0,2), (1,2), (0,3), ...
fn pair_table(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for v in 1..n {
        for u in 0..v {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Size of the index space for `(n, mode)`, or an error when it is out of reach.
pub fn labeled_graph_count(n: usize, mode: EnumerationMode) -> Result<u64, GraphError> {
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    let too_large = || GraphError::EnumerationTooLarge {
        order: n,
        mode: format!("{mode:?}"),
    };
    match mode {
        EnumerationMode::All => {
            if n > MAX_UNRESTRICTED_ORDER {
                return Err(too_large());
            }
            Ok(1u64 << pairs)
        }
        EnumerationMode::ComplementBudget(budget) => {
            let mut total: u64 = 0;
            for size in 0..=(budget as u64).min(pairs) {
                total = total.checked_add(binomial(pairs, size)).ok_or_else(too_large)?;
                if total > MAX_SPACE {
                    return Err(too_large());
                }
            }
            Ok(total)
        }
    }
}

/// Walks a contiguous range of the index space.
struct Cursor {
    n: usize,
    pairs: Vec<(usize, usize)>,
    mode: EnumerationMode,
    index: u64,
    end: u64,
    // ComplementBudget state: current combination of removed pair indices.
    combo: Vec<usize>,
}

impl Cursor {
    fn new(n: usize, mode: EnumerationMode, start: u64, end: u64) -> Self {
        let pairs = pair_table(n);
        let combo = match mode {
            EnumerationMode::All => Vec::new(),
            EnumerationMode::ComplementBudget(_) => unrank_combination(pairs.len(), start),
        };
        Cursor {
            n,
            pairs,
            mode,
            index: start,
            end,
            combo,
        }
    }

    fn current(&self) -> Graph {
        match self.mode {
            EnumerationMode::All => {
                let mut g = Graph::empty(self.n);
                let mut mask = self.index;
                while mask != 0 {
                    let e = mask.trailing_zeros() as usize;
                    mask &= mask - 1;
                    let (u, v) = self.pairs[e];
                    g.add_edge(u, v);
                }
                g
            }
            EnumerationMode::ComplementBudget(_) => {
                let mut g = Graph::complete(self.n);
                for &e in &self.combo {
                    let (u, v) = self.pairs[e];
                    g.remove_edge(u, v);
                }
                g
            }
        }
    }

    fn advance(&mut self) {
        self.index += 1;
        if let EnumerationMode::ComplementBudget(_) = self.mode {
            if !next_combination(&mut self.combo, self.pairs.len()) {
                let size = self.combo.len() + 1;
                self.combo = (0..size).collect();
            }
        }
    }
}

/// Combination with the given global rank: ranks run over sizes 0, 1, 2, ...
/// and lexicographically within a size.
fn unrank_combination(universe: usize, mut rank: u64) -> Vec<usize> {
    let mut size = 0u64;
    loop {
        let count = binomial(universe as u64, size);
        if rank < count || size >= universe as u64 {
            break;
        }
        rank -= count;
        size += 1;
    }
    let mut combo = Vec::with_capacity(size as usize);
    let mut next = 0usize;
    for remaining in (1..=size).rev() {
        loop {
            let with_next = binomial((universe - next - 1) as u64, remaining - 1);
            if rank < with_next {
                combo.push(next);
                next += 1;
                break;
            }
            rank -= with_next;
            next += 1;
        }
    }
    combo
}

fn next_combination(combo: &mut [usize], universe: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < universe - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Emits every labelled graph of the mode to `predicate`; accepted graphs go to `consumer`.
///
/// Chunks run concurrently, so `consumer` must tolerate being called from
/// several threads.
pub fn enumerate_labeled_graphs<P, C>(
    n: usize,
    mode: EnumerationMode,
    predicate: P,
    consumer: C,
) -> Result<EnumerationSummary, GraphError>
where
    P: Fn(&Graph) -> bool + Sync,
    C: Fn(&Graph) + Sync,
{
    let total = labeled_graph_count(n, mode)?;
    let chunks = total.div_ceil(CHUNK);
    let summary = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut cursor = Cursor::new(n, mode, start, end);
            let mut s = EnumerationSummary::default();
            while cursor.index < cursor.end {
                let g = cursor.current();
                s.emitted += 1;
                if predicate(&g) {
                    s.accepted += 1;
                    consumer(&g);
                }
                cursor.advance();
            }
            s
        })
        .reduce(EnumerationSummary::default, |a, b| EnumerationSummary {
            emitted: a.emitted + b.emitted,
            accepted: a.accepted + b.accepted,
        });
    Ok(summary)
}

/// Applies `f` to every graph of the mode and keeps the `Some` results in index order.
pub fn par_map_labeled_graphs<T, F>(
    n: usize,
    mode: EnumerationMode,
    f: F,
) -> Result<Vec<T>, GraphError>
where
    T: Send,
    F: Fn(u64, &Graph) -> Option<T> + Sync,
{
    let total = labeled_graph_count(n, mode)?;
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut cursor = Cursor::new(n, mode, start, end);
            let mut out = Vec::new();
            while cursor.index < cursor.end {
                let g = cursor.current();
                if let Some(t) = f(cursor.index, &g) {
                    out.push(t);
                }
                cursor.advance();
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::sync::Mutex;

    fn count(n: usize, mode: EnumerationMode, pred: impl Fn(&Graph) -> bool + Sync) -> EnumerationSummary {
        enumerate_labeled_graphs(n, mode, pred, |_| {}).unwrap()
    }

    #[test]
    fn small_counts() {
        let s = count(3, EnumerationMode::All, |_| true);
        assert_eq!((s.emitted, s.accepted), (8, 8));
        let s = count(4, EnumerationMode::All, |g| g.is_connected());
        assert_eq!((s.emitted, s.accepted), (64, 38));
    }

    #[test]
    fn connected_counts_match_brute_force() {
        // Connected labelled graphs: 1, 1, 4, 38, 728, 26704 (OEIS A001187).
        let expected = [1u64, 1, 4, 38, 728, 26704];
        for (i, &want) in expected.iter().enumerate() {
            let n = i + 1;
            assert_eq!(count(n, EnumerationMode::All, |g| g.is_connected()).accepted, want, "n={n}");
        }
    }

    #[test]
    fn edge_count_distribution_is_binomial() {
        for n in 1..=4usize {
            let pairs = n * (n - 1) / 2;
            let hist = Mutex::new(BTreeMap::new());
            enumerate_labeled_graphs(n, EnumerationMode::All, |_| true, |g| {
                *hist.lock().unwrap().entry(g.edge_count()).or_insert(0u64) += 1;
            })
            .unwrap();
            let hist = hist.into_inner().unwrap();
            for m in 0..=pairs {
                assert_eq!(hist.get(&m).copied().unwrap_or(0), binomial(pairs as u64, m as u64));
            }
        }
    }

    #[test]
    fn complement_budget_count_and_uniqueness() {
        let total = labeled_graph_count(8, EnumerationMode::ComplementBudget(8)).unwrap();
        let expected: u64 = (0..=8).map(|i| binomial(28, i)).sum();
        assert_eq!(total, expected);
        assert_eq!(total, 4_791_323);

        // Every graph appears exactly once at a smaller order.
        let graphs = par_map_labeled_graphs(6, EnumerationMode::ComplementBudget(4), |_, g| Some(g.clone())).unwrap();
        let expected: u64 = (0..=4).map(|i| binomial(15, i)).sum();
        assert_eq!(graphs.len() as u64, expected);
        let distinct: std::collections::HashSet<_> = graphs.iter().collect();
        assert_eq!(distinct.len(), graphs.len());
        assert!(graphs.iter().all(|g| g.edge_count() >= 11));
    }

    #[test]
    fn unranking_matches_sequential_walk() {
        let mut combo: Vec<usize> = Vec::new();
        let universe = 7;
        let mut rank = 0u64;
        for size in 0..=3usize {
            combo = (0..size).collect();
            loop {
                assert_eq!(unrank_combination(universe, rank), combo);
                rank += 1;
                if !next_combination(&mut combo, universe) {
                    break;
                }
            }
        }
        assert_eq!(combo.len(), 3);
    }

    #[test]
    fn oversized_requests_are_rejected() {
        assert!(labeled_graph_count(8, EnumerationMode::All).is_err());
        assert!(labeled_graph_count(40, EnumerationMode::ComplementBudget(30)).is_err());
    }
}
