//! β-skeletons, k-β-skeletons and the Euclidean minimum spanning tree.
//!
//! The skeleton builders are the brute-force reference construction: every
//! pair is tested against every other point. Work is split across pairs with
//! rayon; the output does not depend on scheduling.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geom::{angle_at, check_beta, region_bounding_radius, AngleParams, Point};

/// Ordered, duplicate-free points with stable indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some((first, second)) = find_duplicate(&points) {
            return Err(Error::DuplicatePoint { first, second });
        }
        Ok(PointSet { points })
    }

    pub fn from_coords<I: IntoIterator<Item = (f64, f64)>>(coords: I) -> Result<Self> {
        let points = coords.into_iter().map(Point::try_from).collect::<Result<Vec<_>>>()?;
        PointSet::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Result<Point> {
        self.points.get(i).copied().ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.points.len(),
        })
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.points[i].dist(self.points[j])
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        self.get(i).map(|_| ())
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

fn find_duplicate(points: &[Point]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].x().total_cmp(&points[j].x()).then(i.cmp(&j)));
    let mut best: Option<(usize, usize)> = None;
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if points[j].x() - points[i].x() > crate::geom::COINCIDENCE_TOL {
                break;
            }
            if points[i].coincides(points[j]) {
                let pair = (i.min(j), i.max(j));
                best = Some(best.map_or(pair, |b| b.min(pair)));
            }
        }
    }
    best
}

/// Undirected graph over the indices of a [`PointSet`], weighted by Euclidean length.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl SkeletonGraph {
    /// Builds a graph from arbitrary index pairs; pairs are normalized and deduplicated.
    pub fn from_edges<I>(ps: &PointSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (i, j) in pairs {
            ps.check_index(i)?;
            ps.check_index(j)?;
            if i == j {
                return Err(Error::SameEndpoints(i));
            }
            edges.push((i.min(j), i.max(j)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted(ps, edges))
    }

    fn from_sorted(ps: &PointSet, edges: Vec<(usize, usize)>) -> Self {
        let n = ps.len();
        let lengths: Vec<f64> = edges.iter().map(|&(i, j)| ps.dist(i, j)).collect();
        let mut adjacency = vec![Vec::new(); n];
        for (&(i, j), &len) in edges.iter().zip(&lengths) {
            adjacency[i].push((j, len));
            adjacency[j].push((i, len));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        SkeletonGraph {
            n,
            edges,
            lengths,
            adjacency,
        }
    }

    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn path(ps: &PointSet) -> Self {
        let edges = (1..ps.len()).map(|i| (i - 1, i)).collect();
        Self::from_sorted(ps, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adjacency[i].binary_search_by_key(&j, |&(v, _)| v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Returns a copy with one more edge.
    pub fn with_edge(&self, ps: &PointSet, i: usize, j: usize) -> Result<Self> {
        Self::from_edges(ps, self.edges.iter().copied().chain([(i, j)]))
    }
}

/// Counts points other than `i`, `j` that block segment `ij`, stopping at `limit`.
///
/// Indices between `i` and `j` are scanned first: on polylines the blocker of
/// a chord usually lies between its endpoints, so the early exit triggers
/// sooner. The count itself does not depend on scan order.
fn count_blockers(ps: &PointSet, i: usize, j: usize, params: &AngleParams, limit: usize) -> usize {
    let pts = ps.points();
    let (a, b) = (pts[i], pts[j]);
    let m = a.midpoint(b);
    let reach = region_bounding_radius(a.dist(b), params.beta());
    let reach_sq = reach * reach * (1.0 + 1e-9);
    let (lo, hi) = (i.min(j), i.max(j));
    let between = lo + 1..hi;
    let outside = (0..lo).chain(hi + 1..pts.len());

    let mut count = 0;
    for c in between.chain(outside) {
        let p = pts[c];
        if p.dist_sq(m) >= reach_sq {
            continue;
        }
        // Point-set construction rules out coincidence with a or b.
        let angle = angle_at(p, a, b).expect("distinct points");
        if params.blocks(angle) {
            count += 1;
            if count >= limit {
                break;
            }
        }
    }
    count
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(invalid("k", 0.0, "must be a positive integer"))
    } else {
        Ok(())
    }
}

/// Whether `ij` is an edge of the k-β-skeleton: fewer than `k` points see
/// the segment under an angle above the β threshold.
pub fn edge_in_skeleton(ps: &PointSet, i: usize, j: usize, beta: f64, k: usize) -> Result<bool> {
    ps.check_index(i)?;
    ps.check_index(j)?;
    if i == j {
        return Err(Error::SameEndpoints(i));
    }
    check_k(k)?;
    let params = AngleParams::new(beta)?;
    Ok(count_blockers(ps, i, j, &params, k) < k)
}

/// The β-skeleton (k = 1).
pub fn build_skeleton(ps: &PointSet, beta: f64) -> Result<SkeletonGraph> {
    build_k_skeleton(ps, beta, 1)
}

pub fn build_k_skeleton(ps: &PointSet, beta: f64, k: usize) -> Result<SkeletonGraph> {
    check_beta(beta)?;
    check_k(k)?;
    let params = AngleParams::new(beta)?;
    let n = ps.len();
    let rows: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .filter(|&j| count_blockers(ps, i, j, &params, k) < k)
                .map(|j| (i, j))
                .collect()
        })
        .collect();
    Ok(SkeletonGraph::from_sorted(ps, rows.into_iter().flatten().collect()))
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal over the complete Euclidean graph; equal lengths are taken in
/// lexicographic index order.
pub fn euclidean_mst(ps: &PointSet) -> SkeletonGraph {
    let n = ps.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((ps.dist(i, j), i, j));
        }
    }
    pairs.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut ds = DisjointSet::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (_, i, j) in pairs {
        if ds.union(i, j) {
            tree.push((i, j));
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    tree.sort_unstable();
    SkeletonGraph::from_sorted(ps, tree)
}
