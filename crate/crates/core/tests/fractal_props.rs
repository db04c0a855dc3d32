use std::f64::consts::{FRAC_PI_4, PI};

use betaskel::fractal::{max_skeleton_angle, segment_length};
use betaskel::{
    build_skeleton, fractal_unit_dilation, generate_fractal, verify_diamond_containment, verify_is_skeleton,
    FractalSpec, Orientation, Point,
};

const ORIENTATIONS: [Orientation; 2] = [Orientation::Alternating, Orientation::Uniform];

#[test]
fn counts_lengths_and_endpoints() {
    for theta in [0.05, 0.4, FRAC_PI_4, 1.0, 1.5] {
        for o in ORIENTATIONS {
            for depth in 0..=5 {
                let spec = FractalSpec::new(theta, depth).unwrap().with_orientation(o);
                let path = generate_fractal(&spec);
                assert_eq!(path.vertices().len(), 5usize.pow(depth) + 1);
                assert_eq!(path.vertices().len(), spec.vertex_count());
                assert_eq!(path.vertices()[0], Point::ORIGIN);
                assert_eq!(
                    path.vertices()[path.vertices().len() - 1],
                    Point::new(1.0, 0.0).unwrap()
                );

                let expect = fractal_unit_dilation(theta).unwrap().powi(depth as i32);
                assert!((path.total_length() / expect - 1.0).abs() < 1e-9);
                let seg = segment_length(theta).unwrap().powi(depth as i32);
                let summed: f64 = path.vertices().windows(2).map(|w| w[0].dist(w[1])).sum();
                assert!((summed / path.total_length() - 1.0).abs() < 1e-12);
                for w in path.vertices().windows(2) {
                    assert!((w[0].dist(w[1]) / seg - 1.0).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn diamonds_at_every_scale() {
    for theta in [0.1, 0.7, 1.4] {
        for o in ORIENTATIONS {
            for depth in 0..=4 {
                let path = generate_fractal(&FractalSpec::new(theta, depth).unwrap().with_orientation(o));
                assert!(verify_diamond_containment(&path), "theta={theta} depth={depth} {o:?}");
            }
        }
    }
}

#[test]
fn skeleton_below_angle_bound() {
    for beta in [0.3, 0.6, 1.0, 1.5] {
        let bound = max_skeleton_angle(beta).unwrap();
        for frac in [0.5, 0.95] {
            for o in ORIENTATIONS {
                for depth in 1..=3 {
                    let spec = FractalSpec::new(frac * bound, depth).unwrap().with_orientation(o);
                    let path = generate_fractal(&spec);
                    assert!(
                        verify_is_skeleton(&path, beta).unwrap(),
                        "beta={beta} frac={frac} depth={depth} {o:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn gabriel_sample_paths() {
    for depth in 1..=3 {
        let path = generate_fractal(&FractalSpec::new(FRAC_PI_4, depth).unwrap());
        let g = build_skeleton(&path.point_set(), 1.0).unwrap();
        assert_eq!(g.edge_set(), path.path_edges());
    }
    assert!((max_skeleton_angle(1.0).unwrap() - PI / 4.0).abs() < 1e-15);
}
