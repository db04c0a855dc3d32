mod common;

use std::collections::HashSet;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, SQRT_2};

use betaskel::dilation::shortest_path_lengths;
use betaskel::routing::{spiral_chain, walk_length, Side};
use betaskel::{
    boundary_length, build_skeleton, dilation_upper_bound, fractal_unit_dilation, generate_fractal, greedy_route,
    prune_tree, single_leaf_bound, tree_length_bound, FractalSpec, TriangleTree,
};
use common::random_points;
use rand::Rng;

#[test]
fn greedy_invariants_on_random_sets() {
    for (seed, n) in [(1, 20), (2, 50), (3, 100), (4, 200)] {
        let ps = random_points(n, 300 + seed);
        for beta in [0.3, 0.5, FRAC_1_SQRT_2, 0.8, 0.95, 1.0] {
            let g = build_skeleton(&ps, beta).unwrap();
            let floor = PI - beta.asin();
            let bound = dilation_upper_bound(n, beta).unwrap();
            for (s, t) in [(0, n - 1), (1, n / 2), (n / 3, 2 * n / 3), (n - 2, 3)] {
                let route = greedy_route(&g, &ps, beta, s, t).unwrap();
                let d = ps.dist(s, t);

                assert_eq!(route.path.first(), Some(&s));
                assert_eq!(route.path.last(), Some(&t));
                assert!(route.path.windows(2).all(|w| g.has_edge(w[0], w[1])));
                assert_eq!(route.path, route.tree.expand_walk());
                assert!((route.length - route.boundary_length).abs() < 1e-9);
                assert!((boundary_length(&route.tree, &ps) - route.length).abs() < 1e-9);
                if let Some(min) = route.tree.min_apex_angle(&ps).unwrap() {
                    assert!(min >= floor - 1e-9);
                }
                // Leaf triangles close off both short sides with skeleton edges.
                for node in route.tree.nodes().iter().filter(|n| n.is_leaf()) {
                    let tri = node.triangle;
                    assert!(g.has_edge(tri.a, tri.r) && g.has_edge(tri.r, tri.b));
                }

                let shortest = shortest_path_lengths(&g, s)[t].unwrap();
                assert!(route.length >= shortest - 1e-9);
                assert!(shortest >= d - 1e-12);
                assert!(route.length / d <= bound, "beta={beta} n={n}");

                let (pruned, walk) = prune_tree(&route.tree, &ps).unwrap();
                pruned.validate().unwrap();
                assert!(pruned.max_leaf_multiplicity() <= 2);
                assert!(pruned.leaf_count() <= 2 * n);
                assert!(pruned.leaf_count() <= route.tree.leaf_count());
                assert_eq!((walk[0], *walk.last().unwrap()), (s, t));
                assert!(walk.windows(2).all(|w| g.has_edge(w[0], w[1])));
                let pruned_len = boundary_length(&pruned, &ps);
                assert!(walk_length(&walk, &ps) <= pruned_len + 1e-9);
                assert!(walk_length(&walk, &ps) <= route.length + 1e-9);
                if pruned.leaf_count() > 0 && beta < 1.0 {
                    assert!(pruned_len / d <= tree_length_bound(floor, pruned.leaf_count()).unwrap());
                }
            }
        }
    }
}

/// Random tree over a small label pool so that leaf vertices repeat often.
fn random_tree(rng: &mut impl Rng, pool: usize, max_nodes: usize) -> TriangleTree {
    let mut tree = TriangleTree::new(0, 1);
    let pick = |rng: &mut dyn rand::RngCore, a: usize, b: usize| loop {
        let r = rng.gen_range(0..pool);
        if r != a && r != b {
            break r;
        }
    };
    let root = tree.set_root(pick(rng, 0, 1)).unwrap();
    let mut open = vec![(root, Side::Left), (root, Side::Right)];
    while tree.len() < max_nodes && !open.is_empty() {
        let (parent, side) = open.swap_remove(rng.gen_range(0..open.len()));
        if rng.gen_bool(0.25) {
            continue;
        }
        let tri = tree.node(parent).triangle;
        let (a, b) = match side {
            Side::Left => (tri.a, tri.r),
            Side::Right => (tri.r, tri.b),
        };
        let id = tree.attach(parent, side, pick(rng, a, b)).unwrap();
        open.extend([(id, Side::Left), (id, Side::Right)]);
    }
    tree
}

#[test]
fn pruning_random_trees() {
    let ps = random_points(7, 77);
    let mut rng = common::rng(2024);
    let mut exercised = 0;
    for _ in 0..2000 {
        let max_nodes = rng.gen_range(1..40);
        let tree = random_tree(&mut rng, ps.len(), max_nodes);
        let sides: HashSet<(usize, usize)> = tree
            .nodes()
            .iter()
            .flat_map(|n| {
                let t = n.triangle;
                [(t.a, t.r), (t.r, t.b), (t.a, t.b)]
            })
            .flat_map(|(u, v)| [(u, v), (v, u)])
            .collect();
        if tree.max_leaf_multiplicity() >= 3 {
            exercised += 1;
        }

        let (pruned, walk) = prune_tree(&tree, &ps).unwrap();
        pruned.validate().unwrap();
        assert_eq!(pruned.root_pair(), (0, 1));
        assert!(pruned.max_leaf_multiplicity() <= 2);
        assert!(pruned.leaf_count() <= 2 * ps.len());
        assert!(pruned.len() <= tree.len());
        if tree.max_leaf_multiplicity() <= 2 {
            assert_eq!(walk, tree.expand_walk());
        }
        assert_eq!((walk[0], *walk.last().unwrap()), (0, 1));
        assert!(walk.windows(2).all(|w| w[0] == w[1] || sides.contains(&(w[0], w[1]))));
        assert!(walk_length(&walk, &ps) <= boundary_length(&pruned, &ps) + 1e-9);
        assert!(walk_length(&walk, &ps) <= boundary_length(&tree, &ps) + 1e-9);

        // Pruned leaf vertices still occur along the walk, in order.
        let mut pos = 0;
        for v in pruned.leaf_vertices() {
            pos += walk[pos..].iter().position(|&w| w == v).expect("leaf vertex on walk");
        }
    }
    assert!(exercised > 100, "only {exercised} trees needed pruning");
}

#[test]
fn fractal_route_follows_path() {
    let path = generate_fractal(&FractalSpec::new(FRAC_PI_4, 1).unwrap());
    let ps = path.point_set();
    let g = build_skeleton(&ps, 1.0).unwrap();
    let route = greedy_route(&g, &ps, 1.0, 0, 5).unwrap();
    assert_eq!(route.path, vec![0, 1, 2, 3, 4, 5]);
    assert!((route.length - fractal_unit_dilation(FRAC_PI_4).unwrap()).abs() < 1e-12);
    assert!((route.length - path.total_length()).abs() < 1e-12);
}

/// Arc length of the logarithmic spiral that keeps angle `π - θ` to the
/// origin, starting at radius one: `r(φ) = e^{-φ·cot(π-θ)}`, integrated with
/// composite Simpson over `φ ∈ [0, Φ]`.
fn spiral_arc_length(theta: f64) -> f64 {
    let k = 1.0 / (PI - theta).tan();
    let speed = |phi: f64| {
        let r = (-k * phi).exp();
        (r * r + (k * r) * (k * r)).sqrt()
    };
    let (upper, steps) = (60.0 / k, 200_000);
    let h = upper / steps as f64;
    let mut sum = speed(0.0) + speed(upper);
    for i in 1..steps {
        sum += speed(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[test]
fn spiral_chains_approach_leaf_bound() {
    let theta = 3.0 * PI / 4.0;
    let limit = spiral_arc_length(theta);
    assert!((limit - SQRT_2).abs() < 1e-9);
    assert!((single_leaf_bound(theta).unwrap() - limit).abs() < 1e-9);

    let mut prev = 0.0;
    for count in [100, 1_000, 10_000, 100_000] {
        let (ps, tree) = spiral_chain(theta, count).unwrap();
        assert_eq!(tree.leaf_count(), 1);
        let len = boundary_length(&tree, &ps);
        assert!(len > prev);
        assert!(len < limit);
        prev = len;
    }
    assert!(limit - prev < 1e-3);
}

#[test]
fn spiral_chains_at_other_angles() {
    for theta in [0.6 * PI, 2.0 * PI / 3.0, 0.9 * PI] {
        let limit = spiral_arc_length(theta);
        assert!((limit - single_leaf_bound(theta).unwrap()).abs() < 1e-6);
        let (ps, tree) = spiral_chain(theta, 20_000).unwrap();
        let len = boundary_length(&tree, &ps);
        assert!(len < limit && limit - len < 1e-2, "theta={theta}: {len} vs {limit}");
        let min = tree.min_apex_angle(&ps).unwrap().unwrap();
        assert!(min >= theta - 1e-9);
    }
}
