//! Greedy recursive routing on β-skeletons (β <= 1) and its triangle-tree accounting.
//!
//! To route from `s` to `t`: take the edge if it exists, otherwise pick the
//! point `r` that sees `st` under the largest angle and route `s -> r` and
//! `r -> t`. Each such split is recorded as a triangle `(s, r, t)` whose
//! hypotenuse is `st`; the children of a triangle hang off its two short sides.
//!
//! The boundary length of a tree is
//! `|T| = dist(s, t) + Σ (perimeter(Δ) - 2·hypotenuse(Δ))`,
//! which equals the sum of all short sides that have no child triangle.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::geom::{angle_at, check_beta, AngleParams};
use crate::skeleton::{PointSet, SkeletonGraph};

pub type NodeId = usize;

/// Triangle with hypotenuse `a`-`b` and apex `r`, as point indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub a: usize,
    pub r: usize,
    pub b: usize,
}

/// Which short side of the parent a child triangle hangs from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The child's hypotenuse is the parent's `a`-`r` side.
    Left,
    /// The child's hypotenuse is the parent's `r`-`b` side.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleNode {
    pub triangle: Triangle,
    pub parent: Option<NodeId>,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
}

impl TriangleNode {
    pub fn is_leaf(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }

    fn child(&self, side: Side) -> Option<NodeId> {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

/// Rooted binary tree of triangles stored in an arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleTree {
    s: usize,
    t: usize,
    root: Option<NodeId>,
    nodes: Vec<TriangleNode>,
}

#[derive(Clone, Copy)]
enum Step {
    Node(NodeId),
    Emit(usize, Option<NodeId>),
}

impl TriangleTree {
    /// An empty tree: `s` and `t` are joined directly.
    pub fn new(s: usize, t: usize) -> Self {
        TriangleTree {
            s,
            t,
            root: None,
            nodes: Vec::new(),
        }
    }

    pub fn root_pair(&self) -> (usize, usize) {
        (self.s, self.t)
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn nodes(&self) -> &[TriangleNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &TriangleNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Installs the root triangle `(s, r, t)`.
    pub fn set_root(&mut self, r: usize) -> Result<NodeId> {
        if self.root.is_some() {
            return Err(Error::MalformedTree("root already set".into()));
        }
        let id = self.push(
            Triangle {
                a: self.s,
                r,
                b: self.t,
            },
            None,
        );
        self.root = Some(id);
        Ok(id)
    }

    /// Hangs a triangle with apex `r` off one short side of `parent`.
    pub fn attach(&mut self, parent: NodeId, side: Side, r: usize) -> Result<NodeId> {
        let p = self
            .nodes
            .get(parent)
            .ok_or_else(|| Error::MalformedTree(format!("no node {parent}")))?;
        if p.child(side).is_some() {
            return Err(Error::MalformedTree(format!(
                "node {parent} already has a {side:?} child"
            )));
        }
        let tri = p.triangle;
        let (a, b) = match side {
            Side::Left => (tri.a, tri.r),
            Side::Right => (tri.r, tri.b),
        };
        let id = self.push(Triangle { a, r, b }, Some(parent));
        match side {
            Side::Left => self.nodes[parent].left = Some(id),
            Side::Right => self.nodes[parent].right = Some(id),
        }
        Ok(id)
    }

    fn push(&mut self, triangle: Triangle, parent: Option<NodeId>) -> NodeId {
        self.nodes.push(TriangleNode {
            triangle,
            parent,
            left: None,
            right: None,
        });
        self.nodes.len() - 1
    }

    /// Assembles a tree from raw nodes, checking its structure.
    pub fn from_nodes(s: usize, t: usize, root: Option<NodeId>, nodes: Vec<TriangleNode>) -> Result<Self> {
        let tree = TriangleTree { s, t, root, nodes };
        tree.validate()?;
        Ok(tree)
    }

    /// Structural checks: the root spans `s`-`t`, links are mutual, each
    /// child's hypotenuse is the matching short side of its parent, and every
    /// node is reachable from the root exactly once.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedTree(msg));
        let Some(root) = self.root else {
            if self.nodes.is_empty() {
                return Ok(());
            }
            return bad("nodes without a root".into());
        };
        if root >= self.nodes.len() {
            return bad(format!("root {root} out of range"));
        }
        let rt = self.nodes[root].triangle;
        if (rt.a, rt.b) != (self.s, self.t) || self.nodes[root].parent.is_some() {
            return bad("root triangle does not span s-t".into());
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                return bad(format!("node {id} reached twice"));
            }
            let node = &self.nodes[id];
            let tri = node.triangle;
            if tri.r == tri.a || tri.r == tri.b || tri.a == tri.b {
                return bad(format!("node {id} is degenerate"));
            }
            for (side, child) in [(Side::Left, node.left), (Side::Right, node.right)] {
                let Some(c) = child else { continue };
                if c >= self.nodes.len() {
                    return bad(format!("child {c} out of range"));
                }
                let ct = self.nodes[c].triangle;
                let expect = match side {
                    Side::Left => (tri.a, tri.r),
                    Side::Right => (tri.r, tri.b),
                };
                if (ct.a, ct.b) != expect || self.nodes[c].parent != Some(id) {
                    return bad(format!("child {c} does not match side {side:?} of node {id}"));
                }
                stack.push(c);
            }
        }
        if seen.iter().any(|&s| !s) {
            return bad("unreachable nodes".into());
        }
        Ok(())
    }

    fn validate_indices(&self, ps: &PointSet) -> Result<()> {
        ps.check_index(self.s)?;
        ps.check_index(self.t)?;
        for node in &self.nodes {
            let tri = node.triangle;
            ps.check_index(tri.a)?;
            ps.check_index(tri.r)?;
            ps.check_index(tri.b)?;
        }
        Ok(())
    }

    /// In-order walk with each leaf node tagged at the position of its apex.
    fn tagged_walk(&self) -> Vec<(usize, Option<NodeId>)> {
        let mut walk = vec![(self.s, None)];
        let mut stack = match self.root {
            None => vec![Step::Emit(self.t, None)],
            Some(root) => vec![Step::Node(root)],
        };
        while let Some(step) = stack.pop() {
            match step {
                Step::Emit(v, tag) => walk.push((v, tag)),
                Step::Node(id) => {
                    let node = &self.nodes[id];
                    let tri = node.triangle;
                    stack.push(node.right.map_or(Step::Emit(tri.b, None), Step::Node));
                    let tag = node.is_leaf().then_some(id);
                    stack.push(node.left.map_or(Step::Emit(tri.r, tag), Step::Node));
                }
            }
        }
        walk
    }

    /// Vertex sequence obtained by replacing every triangle by its two short
    /// sides, recursively. For a tree built by [`greedy_route`] this is the route.
    pub fn expand_walk(&self) -> Vec<usize> {
        self.tagged_walk().into_iter().map(|(v, _)| v).collect()
    }

    /// Leaf nodes in tree order.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.tagged_walk().into_iter().filter_map(|(_, tag)| tag).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Apex of each leaf triangle, in tree order.
    pub fn leaf_vertices(&self) -> Vec<usize> {
        self.leaves().into_iter().map(|id| self.nodes[id].triangle.r).collect()
    }

    /// Largest number of times any vertex occurs as a leaf vertex.
    pub fn max_leaf_multiplicity(&self) -> usize {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for v in self.leaf_vertices() {
            *counts.entry(v).or_default() += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// Smallest apex angle over all triangles, or `None` for an empty tree.
    pub fn min_apex_angle(&self, ps: &PointSet) -> Result<Option<f64>> {
        self.validate_indices(ps)?;
        let mut min: Option<f64> = None;
        for node in &self.nodes {
            let tri = node.triangle;
            let pts = ps.points();
            let angle = angle_at(pts[tri.r], pts[tri.a], pts[tri.b])?;
            min = Some(min.map_or(angle, |m| m.min(angle)));
        }
        Ok(min)
    }

    /// Copy containing only the nodes marked alive, renumbered in arena order.
    fn compacted(&self, alive: &[bool]) -> TriangleTree {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut next = 0;
        for (id, &keep) in alive.iter().enumerate() {
            if keep {
                remap[id] = next;
                next += 1;
            }
        }
        let map = |id: Option<NodeId>| id.filter(|&c| alive[c]).map(|c| remap[c]);
        let nodes = self
            .nodes
            .iter()
            .zip(alive)
            .filter(|(_, &keep)| keep)
            .map(|(node, _)| TriangleNode {
                triangle: node.triangle,
                parent: map(node.parent),
                left: map(node.left),
                right: map(node.right),
            })
            .collect();
        TriangleTree {
            s: self.s,
            t: self.t,
            root: map(self.root),
            nodes,
        }
    }
}

/// `|T| = dist(s, t) + Σ (perimeter - 2·hypotenuse)` over all triangles.
pub fn boundary_length(tree: &TriangleTree, ps: &PointSet) -> f64 {
    let (s, t) = tree.root_pair();
    tree.nodes.iter().fold(ps.dist(s, t), |acc, node| {
        let Triangle { a, r, b } = node.triangle;
        acc + ps.dist(a, r) + ps.dist(r, b) - ps.dist(a, b)
    })
}

pub fn walk_length(walk: &[usize], ps: &PointSet) -> f64 {
    walk.windows(2).map(|w| ps.dist(w[0], w[1])).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult {
    pub path: Vec<usize>,
    pub length: f64,
    pub tree: TriangleTree,
    pub boundary_length: f64,
}

struct Segment {
    a: usize,
    b: usize,
    slot: Option<(NodeId, Side)>,
}

/// Point maximizing the angle under which it sees `ab`, among points that see
/// it at an obtuse angle (every witness for `β <= 1` does); ties go to the
/// lowest index.
fn widest_witness(ps: &PointSet, a: usize, b: usize) -> Option<(usize, f64)> {
    let pts = ps.points();
    let (pa, pb) = (pts[a], pts[b]);
    let mut best: Option<(usize, f64)> = None;
    for (c, &p) in pts.iter().enumerate() {
        if c == a || c == b || (pa - p).dot(pb - p) >= 0.0 {
            continue;
        }
        let angle = angle_at(p, pa, pb).expect("distinct points");
        if best.is_none_or(|(_, w)| angle > w) {
            best = Some((c, angle));
        }
    }
    best
}

/// Greedy recursive route from `s` to `t` in the β-skeleton `g` of `ps`.
///
/// Requires `β <= 1` so that both sub-segments of a split are shorter than
/// the segment itself; this is also checked at every split.
pub fn greedy_route(g: &SkeletonGraph, ps: &PointSet, beta: f64, s: usize, t: usize) -> Result<RouteResult> {
    check_beta(beta)?;
    if beta > 1.0 {
        return Err(Error::UnsupportedBeta(beta));
    }
    ps.check_index(s)?;
    ps.check_index(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    if g.vertex_count() != ps.len() {
        return Err(invalid(
            "graph",
            g.vertex_count() as f64,
            "vertex count differs from point count",
        ));
    }
    let params = AngleParams::new(beta)?;

    let mut tree = TriangleTree::new(s, t);
    let mut path = vec![s];
    let mut stack = vec![Segment { a: s, b: t, slot: None }];
    while let Some(Segment { a, b, slot }) = stack.pop() {
        if g.has_edge(a, b) {
            path.push(b);
            continue;
        }
        let (r, angle) = widest_witness(ps, a, b).ok_or(Error::NoWitness { s: a, t: b })?;
        if !params.blocks(angle) {
            return Err(Error::NoWitness { s: a, t: b });
        }
        let span = ps.dist(a, b);
        if ps.dist(a, r) >= span || ps.dist(r, b) >= span {
            return Err(Error::NonDecreasing { a, b });
        }
        let id = match slot {
            None => tree.set_root(r)?,
            Some((parent, side)) => tree.attach(parent, side, r)?,
        };
        stack.push(Segment {
            a: r,
            b,
            slot: Some((id, Side::Right)),
        });
        stack.push(Segment {
            a,
            b: r,
            slot: Some((id, Side::Left)),
        });
    }

    let length = walk_length(&path, ps);
    let boundary_length = boundary_length(&tree, ps);
    Ok(RouteResult {
        path,
        length,
        tree,
        boundary_length,
    })
}

/// Prunes a routing tree until no vertex is the leaf vertex of more than two
/// leaves, and returns the pruned tree with a shortened `s`-`t` walk.
///
/// While some vertex `v` is the apex of three or more leaves, the subtrees
/// hanging between its first and last leaf (in tree order) are cut off and
/// the walk between those two visits of `v` is spliced out. Vertices are
/// examined in order of first appearance in the leaf sequence; the scan
/// restarts after every splice.
///
/// The starting walk is the tree's [`TriangleTree::expand_walk`], which for a
/// tree produced by [`greedy_route`] is the route itself.
pub fn prune_tree(tree: &TriangleTree, ps: &PointSet) -> Result<(TriangleTree, Vec<usize>)> {
    tree.validate()?;
    tree.validate_indices(ps)?;

    let mut nodes = tree.nodes.clone();
    let mut alive = vec![true; nodes.len()];
    // Each walk position carries the leaves whose apex it visits.
    let mut walk: Vec<(usize, Vec<NodeId>)> = tree
        .tagged_walk()
        .into_iter()
        .map(|(v, tag)| (v, tag.into_iter().collect()))
        .collect();

    while let Some((v, first, last)) = overloaded_vertex(&walk, &nodes) {
        let ancestors = |mut id: NodeId| {
            let mut chain = vec![id];
            while let Some(p) = nodes[id].parent {
                chain.push(p);
                id = p;
            }
            chain
        };
        let up_first = ancestors(first);
        let up_last = ancestors(last);
        let lca = *up_first
            .iter()
            .find(|id| up_last.contains(id))
            .ok_or_else(|| Error::MalformedTree("leaves share no ancestor".into()))?;

        let mut doomed = Vec::new();
        for pair in up_first.windows(2) {
            let (child, parent) = (pair[0], pair[1]);
            if parent == lca {
                break;
            }
            if nodes[parent].left == Some(child) {
                doomed.extend(nodes[parent].right.take());
            }
        }
        for pair in up_last.windows(2) {
            let (child, parent) = (pair[0], pair[1]);
            if parent == lca {
                break;
            }
            if nodes[parent].right == Some(child) {
                doomed.extend(nodes[parent].left.take());
            }
        }
        while let Some(id) = doomed.pop() {
            alive[id] = false;
            doomed.extend(nodes[id].left);
            doomed.extend(nodes[id].right);
        }

        let p1 = walk.iter().position(|(_, tags)| tags.contains(&first));
        let p2 = walk.iter().position(|(_, tags)| tags.contains(&last));
        let (Some(p1), Some(p2)) = (p1, p2) else {
            return Err(Error::MalformedTree("leaf missing from walk".into()));
        };
        if p2 <= p1 || walk[p1 + 1..p2].iter().flat_map(|(_, t)| t).any(|&id| alive[id]) {
            return Err(Error::MalformedTree("walk does not follow tree order".into()));
        }
        let merged = walk[p2].1.clone();
        walk[p1].1.extend(merged);
        debug_assert_eq!(walk[p1].0, v);
        walk.drain(p1 + 1..=p2);
    }

    let pruned = TriangleTree {
        s: tree.s,
        t: tree.t,
        root: tree.root,
        nodes,
    }
    .compacted(&alive);
    Ok((pruned, walk.into_iter().map(|(v, _)| v).collect()))
}

/// First vertex (in leaf order) that is the apex of at least three live leaves,
/// with its first and last such leaf.
fn overloaded_vertex(walk: &[(usize, Vec<NodeId>)], nodes: &[TriangleNode]) -> Option<(usize, NodeId, NodeId)> {
    let mut order: Vec<usize> = Vec::new();
    let mut seen: HashMap<usize, (usize, NodeId, NodeId)> = HashMap::new();
    for (v, tags) in walk {
        for &leaf in tags {
            debug_assert_eq!(nodes[leaf].triangle.r, *v);
            let entry = seen.entry(*v).or_insert_with(|| {
                order.push(*v);
                (0, leaf, leaf)
            });
            entry.0 += 1;
            entry.2 = leaf;
        }
    }
    order.into_iter().find_map(|v| {
        let (count, first, last) = seen[&v];
        (count >= 3).then_some((v, first, last))
    })
}

fn check_obtuse(theta: f64) -> Result<()> {
    if theta > FRAC_PI_2 && theta <= PI {
        Ok(())
    } else {
        Err(invalid("theta", theta, "must lie in (π/2, π]"))
    }
}

/// `-1/cos θ`: the largest boundary length of a one-leaf tree with unit root
/// hypotenuse whose apex angles are all at least `θ`.
pub fn single_leaf_bound(theta: f64) -> Result<f64> {
    check_obtuse(theta)?;
    Ok(-1.0 / theta.cos())
}

/// `(-1/cos θ)^(1 + ⌊log₂ leaves⌋)`.
pub fn tree_length_bound(theta: f64, leaves: usize) -> Result<f64> {
    let base = single_leaf_bound(theta)?;
    if leaves == 0 {
        return Err(invalid("leaves", 0.0, "must be at least 1"));
    }
    Ok(base.powi(1 + leaves.ilog2() as i32))
}

/// Dilation bound for an `n`-point β-skeleton.
///
/// For `β < √3/2` this is the pruned-tree bound with `2n` leaves and apex
/// angle `π - asin β`; from `√3/2` up to `1` the minimum spanning tree gives
/// the better bound `n - 1`.
pub fn dilation_upper_bound(n: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta > 1.0 {
        return Err(invalid("beta", beta, "must be <= 1"));
    }
    if n == 0 {
        return Err(invalid("n", 0.0, "must be at least 1"));
    }
    if beta < 3f64.sqrt() / 2.0 {
        tree_length_bound(PI - beta.asin(), 2 * n)
    } else {
        Ok((n - 1) as f64)
    }
}

/// Exponent `c` of the `O(n^c)` upper bound, `-½·log₂(1 - β²)`.
pub fn upper_exponent(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 3f64.sqrt() / 2.0) {
        return Err(invalid("beta", beta, "must lie in (0, √3/2)"));
    }
    Ok(-0.5 * (1.0 - beta * beta).log2())
}

/// Exponent `c` of the `Ω(n^c)` lower bound, `log₅(5 / (3 + 2 cos θ))`.
pub fn lower_exponent(theta: f64) -> Result<f64> {
    Ok(crate::fractal::fractal_unit_dilation(theta)?.log(5.0))
}

/// `(upper_exponent(beta), lower_exponent(theta))`.
pub fn bound_exponents(beta: f64, theta: f64) -> Result<(f64, f64)> {
    Ok((upper_exponent(beta)?, lower_exponent(theta)?))
}

/// Residual hypotenuse of [`spiral_chain`] is about `e^-SPIRAL_DECAY`.
pub const SPIRAL_DECAY: f64 = 12.0;

/// One-leaf chain of `count` triangles with apex angle exactly `theta`,
/// winding from `s = (1, 0)` (index 0) toward `t = (0, 0)` (last index).
///
/// Triangle `i` has hypotenuse `r_i`-`t` and apex `r_{i+1}`, and subtends a
/// small angle `γ` at `t`; its long side `r_{i+1}`-`t` becomes the next
/// hypotenuse. As `count` grows with `γ·count` fixed, the chain's boundary
/// length approaches the logarithmic spiral's `-1/cos θ` from below.
pub fn spiral_chain(theta: f64, count: usize) -> Result<(PointSet, TriangleTree)> {
    check_obtuse(theta)?;
    if theta >= PI {
        return Err(invalid("theta", theta, "must be < π"));
    }
    if count == 0 {
        return Err(invalid("count", 0.0, "must be at least 1"));
    }
    let outer = PI - theta;
    let gamma = (SPIRAL_DECAY * outer.tan() / count as f64).min(0.5 * outer);
    let shrink = (outer - gamma).sin() / theta.sin();

    let mut coords = Vec::with_capacity(count + 2);
    coords.push((1.0, 0.0));
    let mut radius = 1.0;
    for i in 1..=count {
        radius *= shrink;
        let (sin, cos) = (i as f64 * gamma).sin_cos();
        coords.push((radius * cos, radius * sin));
    }
    coords.push((0.0, 0.0));
    let ps = PointSet::from_coords(coords)?;

    let t = count + 1;
    let mut tree = TriangleTree::new(0, t);
    let mut node = tree.set_root(1)?;
    for r in 2..=count {
        node = tree.attach(node, Side::Right, r)?;
    }
    Ok((ps, tree))
}
