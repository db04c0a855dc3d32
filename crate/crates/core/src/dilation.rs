//! Exact dilation (stretch factor) by Dijkstra from every source.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::skeleton::{PointSet, SkeletonGraph};

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest-path lengths; `None` for unreachable vertices.
pub fn shortest_path_lengths(g: &SkeletonGraph, source: usize) -> Vec<Option<f64>> {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        dist: 0.0,
        node: source,
    });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, len) in g.neighbors(node) {
            let nd = d + len;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(State { dist: nd, node: next });
            }
        }
    }
    dist.into_iter().map(|d| d.is_finite().then_some(d)).collect()
}

/// Shortest-path length from `s` to `t` divided by `|st|`.
///
/// Returns [`Error::Unreachable`] when `t` cannot be reached from `s`.
pub fn pair_dilation(g: &SkeletonGraph, ps: &PointSet, s: usize, t: usize) -> Result<f64> {
    ps.check_index(s)?;
    ps.check_index(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    match shortest_path_lengths(g, s)[t] {
        Some(d) => Ok(d / ps.dist(s, t)),
        None => Err(Error::Unreachable { s, t }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    /// Largest ratio over connected pairs.
    pub max_dilation: f64,
    /// Lexicographically smallest pair attaining `max_dilation`.
    pub witness: (usize, usize),
    /// Number of unordered pairs with no connecting path.
    pub disconnected_pairs: usize,
    /// Row `i` holds the ratio to every `j > i` (`None` if unreachable), when requested.
    pub per_pair: Option<Vec<Vec<Option<f64>>>>,
}

impl DilationReport {
    pub fn is_connected(&self) -> bool {
        self.disconnected_pairs == 0
    }

    pub fn per_pair_available(&self) -> bool {
        self.per_pair.is_some()
    }
}

pub fn graph_dilation(g: &SkeletonGraph, ps: &PointSet) -> Result<DilationReport> {
    dilation_sweep(g, ps, false)
}

/// Same as [`graph_dilation`] but keeps every pair's ratio.
pub fn graph_dilation_full(g: &SkeletonGraph, ps: &PointSet) -> Result<DilationReport> {
    dilation_sweep(g, ps, true)
}

struct RowSummary {
    best: Option<(f64, usize)>,
    disconnected: usize,
    ratios: Option<Vec<Option<f64>>>,
}

fn dilation_sweep(g: &SkeletonGraph, ps: &PointSet, retain: bool) -> Result<DilationReport> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::NoConnectedPair);
    }
    let rows: Vec<RowSummary> = (0..n)
        .into_par_iter()
        .map(|i| {
            let dist = shortest_path_lengths(g, i);
            let ratios: Vec<Option<f64>> = (i + 1..n).map(|j| dist[j].map(|d| d / ps.dist(i, j))).collect();
            let mut best: Option<(f64, usize)> = None;
            for (offset, r) in ratios.iter().enumerate() {
                if let Some(r) = *r {
                    if best.is_none_or(|(b, _)| r > b) {
                        best = Some((r, i + 1 + offset));
                    }
                }
            }
            RowSummary {
                best,
                disconnected: ratios.iter().filter(|r| r.is_none()).count(),
                ratios: retain.then_some(ratios),
            }
        })
        .collect();

    let mut best: Option<(f64, (usize, usize))> = None;
    let mut disconnected = 0;
    for (i, row) in rows.iter().enumerate() {
        disconnected += row.disconnected;
        if let Some((r, j)) = row.best {
            if best.is_none_or(|(b, _)| r > b) {
                best = Some((r, (i, j)));
            }
        }
    }
    let (max_dilation, witness) = best.ok_or(Error::NoConnectedPair)?;
    Ok(DilationReport {
        max_dilation,
        witness,
        disconnected_pairs: disconnected,
        per_pair: retain.then(|| rows.into_iter().filter_map(|r| r.ratios).collect()),
    })
}
