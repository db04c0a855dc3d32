//! Recursive five-segment fractal paths whose β-skeleton is the path itself.
//!
//! The depth-1 path walks five segments of equal length `s`: horizontal, up at
//! `θ`, horizontal, down at `-θ`, horizontal. Its endpoints are pinned to
//! `(0, 0)` and `(1, 0)`, so the horizontal displacement `3s + 2s·cos θ` must
//! equal one, which forces `s = 1 / (3 + 2 cos θ)`. Depth `k` replaces each of
//! the five segments with a copy of the depth `k - 1` path scaled by `s`.
//!
//! Copy `m` at level `j` of a depth-`k` path occupies vertex indices
//! `m·5^j ..= (m+1)·5^j`. Shared joints are dropped by that index arithmetic,
//! never by comparing coordinates.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Result};
use crate::geom::{angle_threshold, Diamond, Point};
use crate::skeleton::{build_skeleton, PointSet, SkeletonGraph};

pub const DEFAULT_DEPTH_CAP: u32 = 7;

/// How the five child copies are oriented relative to their parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Copies on the slanted segments are mirrored across their own axis.
    #[default]
    Alternating,
    /// Every copy keeps the parent's orientation.
    Uniform,
}

impl Orientation {
    fn flips(self) -> [bool; 5] {
        match self {
            Orientation::Alternating => [false, true, false, true, false],
            Orientation::Uniform => [false; 5],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalSpec {
    theta: f64,
    depth: u32,
    orientation: Orientation,
}

impl FractalSpec {
    pub fn new(theta: f64, depth: u32) -> Result<Self> {
        Self::with_depth_cap(theta, depth, DEFAULT_DEPTH_CAP)
    }

    pub fn with_depth_cap(theta: f64, depth: u32, cap: u32) -> Result<Self> {
        check_theta(theta)?;
        if depth > cap {
            return Err(invalid("depth", depth as f64, "exceeds the depth cap"));
        }
        Ok(FractalSpec {
            theta,
            depth,
            orientation: Orientation::default(),
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn vertex_count(&self) -> usize {
        5usize.pow(self.depth) + 1
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(invalid("theta", theta, "must lie in (0, π/2)"))
    }
}

/// Largest construction angle for which the fractal is guaranteed to be the
/// β-skeleton of its vertices (exclusive bound).
///
/// Any chord between two non-adjacent vertices is seen from one of the three
/// interior joints of some level under an angle of at least `π - 2θ`; that
/// angle has to exceed the β threshold. For `β <= 1` this is `asin(β) / 2`,
/// which is `π/4` for the Gabriel graph.
pub fn max_skeleton_angle(beta: f64) -> Result<f64> {
    Ok(0.5 * (PI - angle_threshold(beta)?))
}

/// Segment length of the depth-1 path, `1 / (3 + 2 cos θ)`.
pub fn segment_length(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(1.0 / (3.0 + 2.0 * theta.cos()))
}

/// Length of the depth-1 path between unit-distance endpoints, `5 / (3 + 2 cos θ)`.
pub fn fractal_unit_dilation(theta: f64) -> Result<f64> {
    Ok(5.0 * segment_length(theta)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalPath {
    spec: FractalSpec,
    vertices: Vec<Point>,
    unit_length: f64,
    total_length: f64,
}

impl FractalPath {
    pub fn spec(&self) -> &FractalSpec {
        &self.spec
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Segment length `s` of the depth-1 scaling step.
    pub fn unit_length(&self) -> f64 {
        self.unit_length
    }

    /// Sum of all segment lengths.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn point_set(&self) -> PointSet {
        PointSet::new(self.vertices.clone()).expect("fractal vertices are distinct")
    }

    pub fn path_graph(&self) -> (PointSet, SkeletonGraph) {
        let ps = self.point_set();
        let g = SkeletonGraph::path(&ps);
        (ps, g)
    }

    pub fn path_edges(&self) -> BTreeSet<(usize, usize)> {
        (1..self.vertices.len()).map(|i| (i - 1, i)).collect()
    }
}

pub fn generate_fractal(spec: &FractalSpec) -> FractalPath {
    let theta = spec.theta;
    let s = 1.0 / (3.0 + 2.0 * theta.cos());
    let (sin, cos) = theta.sin_cos();
    let starts = [
        Point::ORIGIN,
        Point::new(s, 0.0).unwrap(),
        Point::new(s * (1.0 + cos), s * sin).unwrap(),
        Point::new(s * (2.0 + cos), s * sin).unwrap(),
        Point::new(s * (2.0 + 2.0 * cos), 0.0).unwrap(),
    ];
    let headings = [0.0, theta, 0.0, -theta, 0.0];
    let flips = spec.orientation.flips();

    let mut template = vec![Point::ORIGIN, Point::new(1.0, 0.0).unwrap()];
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(5 * (template.len() - 1) + 1);
        next.push(Point::ORIGIN);
        for copy in 0..5 {
            for &q in &template[1..] {
                let q = if flips[copy] {
                    Point::new(q.x(), -q.y()).unwrap()
                } else {
                    q
                };
                next.push(starts[copy] + s * q.rotated(headings[copy]));
            }
        }
        *next.last_mut().unwrap() = Point::new(1.0, 0.0).unwrap();
        template = next;
    }

    let total_length = template.windows(2).map(|w| w[0].dist(w[1])).sum();
    FractalPath {
        spec: *spec,
        vertices: template,
        unit_length: s,
        total_length,
    }
}

/// Checks that every copy at every level lies in the closed diamond spanned
/// by its own endpoints with corner angle `θ`.
pub fn verify_diamond_containment(path: &FractalPath) -> bool {
    let theta = path.spec.theta;
    let v = &path.vertices;
    (0..=path.spec.depth).all(|level| {
        let span = 5usize.pow(level);
        (0..(v.len() - 1) / span).all(|m| {
            let (lo, hi) = (m * span, (m + 1) * span);
            match Diamond::new(v[lo], v[hi], theta) {
                Ok(d) => v[lo..=hi].iter().all(|&p| d.contains(p)),
                Err(_) => false,
            }
        })
    })
}

/// Edges by which the β-skeleton of the path's vertices differs from the path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeDiff {
    pub extra: Vec<(usize, usize)>,
    pub missing: Vec<(usize, usize)>,
}

impl EdgeDiff {
    pub fn is_empty(&self) -> bool {
        self.extra.is_empty() && self.missing.is_empty()
    }
}

pub fn skeleton_mismatch(path: &FractalPath, beta: f64) -> Result<EdgeDiff> {
    let skeleton = build_skeleton(&path.point_set(), beta)?.edge_set();
    let expected = path.path_edges();
    Ok(EdgeDiff {
        extra: skeleton.difference(&expected).copied().collect(),
        missing: expected.difference(&skeleton).copied().collect(),
    })
}

/// Whether the brute-force β-skeleton of the vertices is exactly the path.
pub fn verify_is_skeleton(path: &FractalPath, beta: f64) -> Result<bool> {
    Ok(skeleton_mismatch(path, beta)?.is_empty())
}
