//! β-skeleton proximity graphs and their dilation.
//!
//! * [`geom`]: angle and empty-region predicates, diamonds.
//! * [`skeleton`]: brute-force β-skeletons, k-β-skeletons, Euclidean MST.
//! * [`fractal`]: recursive five-segment paths whose skeleton is the path itself.
//! * [`dilation`]: exact stretch factor via Dijkstra.
//! * [`routing`]: greedy recursive routing, triangle trees, pruning, and the
//!   closed-form dilation bounds.

pub mod dilation;
pub mod error;
pub mod fractal;
pub mod geom;
pub mod routing;
pub mod skeleton;

pub use dilation::{graph_dilation, graph_dilation_full, pair_dilation, DilationReport};
pub use error::{Error, Result};
pub use fractal::{
    fractal_unit_dilation, generate_fractal, max_skeleton_angle, verify_diamond_containment, verify_is_skeleton,
    FractalPath, FractalSpec, Orientation,
};
pub use geom::{angle_at, angle_threshold, region_contains, AngleParams, Diamond, Point};
pub use routing::{
    bound_exponents, boundary_length, dilation_upper_bound, greedy_route, prune_tree, single_leaf_bound,
    tree_length_bound, RouteResult, TriangleTree,
};
pub use skeleton::{build_k_skeleton, build_skeleton, edge_in_skeleton, euclidean_mst, PointSet, SkeletonGraph};
