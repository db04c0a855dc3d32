use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use betaskel_cli::io::{parse_points_csv, points_to_csv, GraphFile};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betaskel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn csv_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pts.csv");
    stdout(&[
        "generate",
        "random",
        "--n",
        "200",
        "--seed",
        "3",
        "--output",
        path_str(&file),
    ]);
    let text = fs::read_to_string(&file).unwrap();
    let ps = parse_points_csv(&text, "pts.csv").unwrap();
    assert_eq!(ps.len(), 200);
    assert_eq!(points_to_csv(&ps), text);

    // The fractal's irrational coordinates survive as well.
    let frac = stdout(&["generate", "fractal", "--theta", "0.7", "--depth", "3"]);
    assert_eq!(points_to_csv(&parse_points_csv(&frac, "f").unwrap()), frac);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    let pts = path_str(&pts);
    let a = stdout(&["generate", "random", "--n", "60", "--seed", "11"]);
    let b = stdout(&["generate", "random", "--n", "60", "--seed", "11"]);
    assert_eq!(a, b);
    assert_ne!(a, stdout(&["generate", "random", "--n", "60", "--seed", "12"]));
    fs::write(pts, &a).unwrap();
    for args in [
        vec!["skeleton", "--input", pts, "--beta", "0.8"],
        vec!["mst", "--input", pts],
        vec!["dilation", "--input", pts, "--beta", "1"],
        vec![
            "route", "--input", pts, "--beta", "0.6", "--source", "3", "--target", "40",
        ],
        vec!["experiment", "growth", "--depth", "3", "--format", "json"],
    ] {
        assert_eq!(stdout(&args), stdout(&args), "{args:?}");
    }
}

#[test]
fn graph_json_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    stdout(&[
        "generate",
        "fractal",
        "--theta",
        "pi/4",
        "--depth",
        "2",
        "--format",
        "json",
        "--output",
        path_str(&graph),
    ]);
    let file: GraphFile = serde_json::from_str(&fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(file.vertices.len(), 26);
    assert_eq!(file.edges.len(), 25);

    let report: serde_json::Value = serde_json::from_str(&stdout(&["dilation", "--input", path_str(&graph)])).unwrap();
    assert_eq!(report["disconnected_pairs"], 0);
    let pair: serde_json::Value = serde_json::from_str(&stdout(&[
        "dilation",
        "--input",
        path_str(&graph),
        "--source",
        "0",
        "--target",
        "25",
    ]))
    .unwrap();
    let want = (5.0 / (3.0 + 2f64.sqrt())).powi(2);
    assert!((pair["dilation"].as_f64().unwrap() - want).abs() < 1e-12);
    assert!(report["max_dilation"].as_f64().unwrap() >= want - 1e-12);

    let route: serde_json::Value = serde_json::from_str(&stdout(&[
        "route",
        "--input",
        path_str(&graph),
        "--beta",
        "1",
        "--source",
        "0",
        "--target",
        "25",
    ]))
    .unwrap();
    let path: Vec<u64> = route["path"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(path, (0..26).collect::<Vec<_>>());
}

#[test]
fn svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("f.svg");
    stdout(&[
        "generate",
        "fractal",
        "--theta",
        "pi/4",
        "--depth",
        "2",
        "--format",
        "svg",
        "--diamonds",
        "--output",
        path_str(&svg),
    ]);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 26);

    let pts = dir.path().join("p.csv");
    stdout(&["generate", "grid", "--n", "4", "--output", path_str(&pts)]);
    let out = stdout(&["render", "--input", path_str(&pts), "--beta", "1", "--theta", "0.5"]);
    assert!(out.starts_with("<svg") && out.contains("<polyline"));
    let plot = stdout(&["experiment", "exponent-curve", "--steps", "10", "--format", "svg"]);
    assert!(plot.contains("<polyline"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["generate", "fractal", "--theta", "pi/4", "--depth", "1"]), 0);
    // Invalid parameters.
    assert_eq!(code(&["generate", "fractal", "--theta", "2", "--depth", "1"]), 1);
    assert_eq!(code(&["generate", "fractal", "--theta", "banana"]), 1);
    assert_eq!(code(&["--check", "generate", "random", "--n", "5"]), 1);
    assert_eq!(code(&["experiment", "exponent-curve", "--beta-max", "0.9"]), 1);
    assert_eq!(
        code(&[
            "generate",
            "collinear",
            "--n",
            "3",
            "--format",
            "svg",
            "--output",
            "/dev/null"
        ]),
        0
    );
    // Failed precondition: the lens skeleton of a wide fractal has shortcuts.
    let out = run(&[
        "experiment",
        "growth",
        "--theta",
        "1.15",
        "--beta",
        "0.7071",
        "--depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra edges"));
    // I/O and malformed input.
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&["mst", "--input", path_str(&missing)]), 3);
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0,0\n1;1\n").unwrap();
    assert_eq!(code(&["mst", "--input", path_str(&bad)]), 3);
    let out_dir = dir.path().join("no/such/dir/out.csv");
    assert_eq!(code(&["generate", "collinear", "--output", path_str(&out_dir)]), 3);
}

#[test]
fn check_mode_commands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("r.csv");
    stdout(&[
        "--check",
        "generate",
        "random",
        "--n",
        "40",
        "--seed",
        "5",
        "--output",
        path_str(&pts),
    ]);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&[
        "--check",
        "route",
        "--input",
        path_str(&pts),
        "--beta",
        "0.5",
        "--all-pairs",
    ]))
    .unwrap();
    assert_eq!(summary["pairs"], 40 * 39);
    assert!(summary["max_ratio"].as_f64().unwrap() <= summary["upper_bound"].as_f64().unwrap());
    stdout(&["--check", "experiment", "spiral", "--counts", "100,1000,10000"]);
    let spiral = run(&["--check", "experiment", "spiral", "--counts", "100,1000"]);
    // Too coarse to come within 1e-3 of the limit.
    assert_eq!(spiral.status.code(), Some(2));
}
