//! Experiment harness: fractal growth, the upper-bound exponent curve, and
//! spiral chains.

use std::fmt::Write as _;

use betaskel::fractal::{skeleton_mismatch, EdgeDiff};
use betaskel::routing::{single_leaf_bound, spiral_chain, upper_exponent};
use betaskel::{
    boundary_length, build_skeleton, dilation_upper_bound, fractal_unit_dilation, generate_fractal, greedy_route,
    pair_dilation, FractalSpec, Orientation,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// One depth of the growth experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub k: u32,
    pub n: usize,
    pub beta: f64,
    pub theta: f64,
    /// Endpoint dilation measured by Dijkstra on the β-skeleton.
    pub dilation: f64,
    /// Greedy route length between the endpoints; `None` for β > 1.
    pub route_length: Option<f64>,
    /// Closed-form dilation upper bound for `n` points; `None` for β > 1.
    pub upper_bound: Option<f64>,
    /// `ℓ₁^k`, the predicted endpoint dilation.
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<ExperimentRow>,
    /// Least-squares slope of `ln dilation` against `ln n`; needs two rows.
    pub fitted_exponent: Option<f64>,
    /// `log₅ ℓ₁`.
    pub predicted_exponent: f64,
}

fn describe(diff: &EdgeDiff) -> String {
    let list = |edges: &[(usize, usize)]| {
        let shown: Vec<String> = edges.iter().take(10).map(|(i, j)| format!("{i}-{j}")).collect();
        let more = edges.len().saturating_sub(10);
        if more > 0 {
            format!("{} (+{more} more)", shown.join(" "))
        } else {
            shown.join(" ")
        }
    };
    format!(
        "extra edges [{}], missing edges [{}]",
        list(&diff.extra),
        list(&diff.missing)
    )
}

fn mismatch_error(diff: &EdgeDiff, beta: f64, theta: f64, k: u32) -> CliError {
    CliError::Check(format!(
        "β-skeleton (β={beta}) of P(θ={theta}, k={k}) is not the path: {}",
        describe(diff)
    ))
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Builds `P(θ,k)` for `k = 1..=k_max`, confirms its β-skeleton is the path,
/// and measures endpoint dilation and greedy route length.
///
/// The skeleton condition is checked at `k = 1` before anything else and
/// then again at every depth; a mismatch is reported as [`CliError::Check`].
pub fn run_growth_experiment(theta: f64, beta: f64, k_max: u32, orientation: Orientation) -> CliResult<GrowthReport> {
    let ell = fractal_unit_dilation(theta)?;
    let predicted_exponent = ell.log(5.0);
    if !(beta.is_finite() && beta > 0.0) {
        return Err(CliError::Invalid(format!("beta must be positive, got {beta}")));
    }
    if k_max > betaskel::fractal::DEFAULT_DEPTH_CAP {
        return Err(CliError::Invalid(format!(
            "depth {k_max} exceeds the cap {}",
            betaskel::fractal::DEFAULT_DEPTH_CAP
        )));
    }
    let first = generate_fractal(&FractalSpec::new(theta, 1)?.with_orientation(orientation));
    let diff = skeleton_mismatch(&first, beta)?;
    if !diff.is_empty() {
        return Err(mismatch_error(&diff, beta, theta, 1));
    }

    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let spec = FractalSpec::new(theta, k)?.with_orientation(orientation);
        let path = generate_fractal(&spec);
        let ps = path.point_set();
        let g = build_skeleton(&ps, beta)?;
        let expected = path.path_edges();
        if g.edge_set() != expected {
            let skel = g.edge_set();
            let diff = EdgeDiff {
                extra: skel.difference(&expected).copied().collect(),
                missing: expected.difference(&skel).copied().collect(),
            };
            return Err(mismatch_error(&diff, beta, theta, k));
        }
        let n = ps.len();
        let (s, t) = (0, n - 1);
        let dilation = pair_dilation(&g, &ps, s, t)?;
        let predicted = ell.powi(k as i32);
        if ((dilation - predicted) / predicted).abs() > 1e-6 {
            return Err(CliError::Check(format!(
                "k={k}: endpoint dilation {dilation} differs from ℓ₁^k = {predicted}"
            )));
        }
        let (route_length, upper_bound) = if beta <= 1.0 {
            let route = greedy_route(&g, &ps, beta, s, t)?;
            (Some(route.length / ps.dist(s, t)), Some(dilation_upper_bound(n, beta)?))
        } else {
            (None, None)
        };
        rows.push(ExperimentRow {
            k,
            n,
            beta,
            theta,
            dilation,
            route_length,
            upper_bound,
            predicted,
        });
    }

    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.dilation.ln()).collect();
    Ok(GrowthReport {
        fitted_exponent: fit_slope(&xs, &ys),
        rows,
        predicted_exponent,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl GrowthReport {
    /// CSV rows followed by `#` summary lines with the exponents.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n,beta,theta,dilation,route_length,upper_bound,predicted\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.k,
                r.n,
                r.beta,
                r.theta,
                r.dilation,
                opt(r.route_length),
                opt(r.upper_bound),
                r.predicted
            )
            .unwrap();
        }
        writeln!(out, "# fitted_exponent,{}", opt(self.fitted_exponent)).unwrap();
        writeln!(out, "# predicted_exponent,{}", self.predicted_exponent).unwrap();
        out
    }
}

/// `(β, upper_c(β))` at `steps + 1` evenly spaced values from `beta_min` to `beta_max`.
pub fn run_exponent_curve(beta_min: f64, beta_max: f64, steps: usize) -> CliResult<Vec<(f64, f64)>> {
    let limit = 3f64.sqrt() / 2.0;
    if !(beta_min > 0.0 && beta_min < beta_max && beta_max < limit) {
        return Err(CliError::Invalid(format!(
            "need 0 < beta_min < beta_max < √3/2, got [{beta_min}, {beta_max}]"
        )));
    }
    if steps == 0 {
        return Err(CliError::Invalid("steps must be at least 1".into()));
    }
    let h = (beta_max - beta_min) / steps as f64;
    (0..=steps)
        .map(|i| {
            let beta = if i == steps { beta_max } else { beta_min + i as f64 * h };
            Ok((beta, upper_exponent(beta)?))
        })
        .collect()
}

pub fn curve_to_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("beta,upper_c\n");
    for (b, c) in curve {
        writeln!(out, "{b},{c}").unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpiralRow {
    pub count: usize,
    pub length: f64,
    /// `-1/cos θ`, the continuous spiral's length.
    pub limit: f64,
}

/// Boundary length of constant-angle spiral chains with the given triangle counts.
pub fn run_spiral_experiment(theta: f64, counts: &[usize]) -> CliResult<Vec<SpiralRow>> {
    let limit = single_leaf_bound(theta)?;
    counts
        .iter()
        .map(|&count| {
            let (ps, tree) = spiral_chain(theta, count)?;
            Ok(SpiralRow {
                count,
                length: boundary_length(&tree, &ps),
                limit,
            })
        })
        .collect()
}

pub fn spiral_to_csv(rows: &[SpiralRow]) -> String {
    let mut out = String::from("count,length,limit,gap\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.count, r.length, r.limit, r.limit - r.length).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    #[test]
    fn growth_rows_match_powers() {
        let report = run_growth_experiment(FRAC_PI_4, 1.0, 5, Orientation::Alternating).unwrap();
        let got: Vec<f64> = report.rows.iter().map(|r| r.dilation).collect();
        for (g, want) in got.iter().zip([1.13270, 1.28300, 1.45327]) {
            assert!((g - want).abs() < 1e-4, "{g} vs {want}");
        }
        for r in &report.rows {
            assert_eq!(r.n, 5usize.pow(r.k) + 1);
            assert!(r.dilation <= r.upper_bound.unwrap());
            assert!(r.route_length.unwrap() >= r.dilation - 1e-12);
        }
        let fit = report.fitted_exponent.unwrap();
        assert!((fit / report.predicted_exponent - 1.0).abs() < 0.05);
    }

    #[test]
    fn growth_edge_cases() {
        let empty = run_growth_experiment(FRAC_PI_4, 1.0, 0, Orientation::Alternating).unwrap();
        assert!(empty.rows.is_empty());
        assert_eq!(empty.fitted_exponent, None);
        assert!(empty.to_csv().contains("# fitted_exponent,\n"));

        // Far above the admissible angle for a lens skeleton.
        let err = run_growth_experiment(1.15, FRAC_1_SQRT_2, 2, Orientation::Alternating).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("extra edges"));

        assert_eq!(
            run_growth_experiment(FRAC_PI_4, 1.0, 99, Orientation::Alternating)
                .unwrap_err()
                .exit_code(),
            1
        );
        assert_eq!(
            run_growth_experiment(PI, 1.0, 1, Orientation::Alternating)
                .unwrap_err()
                .exit_code(),
            1
        );
    }

    #[test]
    fn wide_beta_growth_has_no_route() {
        let report = run_growth_experiment(0.3, 1.5, 2, Orientation::Uniform).unwrap();
        assert!(report
            .rows
            .iter()
            .all(|r| r.route_length.is_none() && r.upper_bound.is_none()));
    }

    #[test]
    fn exponent_curve() {
        let curve = run_exponent_curve(0.1, FRAC_1_SQRT_2, 4).unwrap();
        assert_eq!(curve.len(), 5);
        assert_eq!(curve[4].0, FRAC_1_SQRT_2);
        assert!((curve[4].1 - 0.5).abs() < 1e-12);
        assert!(curve.windows(2).all(|w| w[1].1 > w[0].1));
        assert!(run_exponent_curve(0.5, 0.4, 3).is_err());
        assert!(run_exponent_curve(0.1, 0.9, 3).is_err());
        assert!(run_exponent_curve(0.1, 0.5, 0).is_err());
    }

    #[test]
    fn slope_fit() {
        assert_eq!(fit_slope(&[1.0], &[2.0]), None);
        let s = fit_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((s - 2.0).abs() < 1e-15);
    }
}
