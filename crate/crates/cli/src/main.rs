use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use betaskel::{
    build_k_skeleton, dilation_upper_bound, euclidean_mst, generate_fractal, graph_dilation, greedy_route,
    pair_dilation, prune_tree, Diamond, FractalSpec, Orientation, PointSet, SkeletonGraph,
};
use betaskel_cli::error::CliResult;
use betaskel_cli::experiment::{
    curve_to_csv, run_exponent_curve, run_growth_experiment, run_spiral_experiment, spiral_to_csv,
};
use betaskel_cli::io::{edges_to_csv, emit, load_input, points_to_csv, GraphFile, Input};
use betaskel_cli::render::{graph_svg, line_plot_svg};
use betaskel_cli::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// β-skeleton construction, dilation measurement and routing experiments.
#[derive(Parser)]
#[command(name = "betaskel", version)]
struct Cli {
    /// Test mode: reject unseeded randomness and fail (exit 2) when a
    /// command's built-in check does not hold.
    #[arg(long, global = true)]
    check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a point set (fractal, random, grid or collinear).
    Generate(GenerateArgs),
    /// β-skeleton (or k-β-skeleton) of a point set.
    Skeleton(SkeletonArgs),
    /// Euclidean minimum spanning tree of a point set.
    Mst(MstArgs),
    /// Exact dilation of a graph, or of one pair with --source/--target.
    Dilation(DilationArgs),
    /// Greedy recursive routing in a β-skeleton.
    Route(RouteArgs),
    #[command(subcommand)]
    Experiment(Experiment),
    /// Draw a point set or graph as SVG.
    Render(RenderArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Copy, Clone, ValueEnum)]
enum GenKind {
    Fractal,
    Random,
    Grid,
    Collinear,
}

#[derive(Copy, Clone, Default, ValueEnum)]
enum OrientationArg {
    #[default]
    Alternating,
    Uniform,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Alternating => Orientation::Alternating,
            OrientationArg::Uniform => Orientation::Uniform,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Output {
    fn format_or(&self, default: Format, allowed: &[Format]) -> CliResult<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Invalid(format!(
                "format {:?} not supported here",
                f.to_possible_value().unwrap().get_name()
            )))
        }
    }

    fn write(&self, content: &str) -> CliResult<()> {
        emit(self.output.as_deref(), content)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Fractal angle in radians; also accepts `pi/4`, `3pi/4`, ...
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    /// Fractal recursion depth.
    #[arg(long, default_value_t = 1)]
    depth: u32,
    #[arg(long, value_enum, default_value_t)]
    orientation: OrientationArg,
    /// Number of points (random, collinear) or points per side (grid).
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Overlay each depth-1 copy's diamond in SVG output of a fractal.
    #[arg(long)]
    diamonds: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SkeletonArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    beta: f64,
    /// Number of blockers an edge tolerates minus one.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct MstArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DilationArgs {
    /// Graph JSON, or point CSV together with --beta.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    source: Option<usize>,
    #[arg(long)]
    target: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct RouteArgs {
    /// Point CSV (the β-skeleton is built) or graph JSON (its edges are used).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    beta: f64,
    #[arg(long, required_unless_present = "all_pairs")]
    source: Option<usize>,
    #[arg(long, required_unless_present = "all_pairs")]
    target: Option<usize>,
    /// Route every ordered pair and summarize.
    #[arg(long, conflicts_with_all = ["source", "target"])]
    all_pairs: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum Experiment {
    /// Dilation of P(θ,k) for k = 1..depth with a fitted growth exponent.
    Growth(GrowthArgs),
    /// Upper-bound exponent as a function of β.
    ExponentCurve(CurveArgs),
    /// Boundary length of constant-angle spiral chains.
    Spiral(SpiralArgs),
}

#[derive(Args)]
struct GrowthArgs {
    #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Largest depth k.
    #[arg(long, default_value_t = 5)]
    depth: u32,
    #[arg(long, value_enum, default_value_t)]
    orientation: OrientationArg,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value_t = 0.01)]
    beta_min: f64,
    #[arg(long, default_value_t = 0.866)]
    beta_max: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SpiralArgs {
    #[arg(long, value_parser = parse_angle, default_value = "3pi/4")]
    theta: f64,
    /// Comma-separated triangle counts.
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000")]
    counts: Vec<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct RenderArgs {
    /// Point CSV or graph JSON.
    #[arg(long)]
    input: PathBuf,
    /// Draw the β-skeleton instead of the file's own edges.
    #[arg(long)]
    beta: Option<f64>,
    /// Overlay a diamond with this corner angle on every edge.
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Radians as a plain number or as `[a]pi[/b]`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("`{s}` is not an angle (try 0.785 or pi/4)");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coeff = num
        .trim()
        .strip_suffix("pi")
        .ok_or_else(bad)?
        .trim()
        .trim_end_matches('*');
    let coeff = if coeff.is_empty() {
        1.0
    } else {
        coeff.parse::<f64>().map_err(|_| bad())?
    };
    Ok(coeff * PI / den)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Check(msg()))
    }
}

fn graph_output(out: &Output, ps: &PointSet, g: &SkeletonGraph) -> CliResult<()> {
    let text = match out.format_or(Format::Json, &[Format::Json, Format::Csv, Format::Svg])? {
        Format::Json => GraphFile::from_graph(ps, g).to_json(),
        Format::Csv => edges_to_csv(g.edges()),
        Format::Svg => graph_svg(ps, g.edges(), &[]),
    };
    out.write(&text)
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn generate(args: &GenerateArgs, checked: bool) -> CliResult<()> {
    let mut edges = Vec::new();
    let mut diamonds = Vec::new();
    let ps = match args.kind {
        GenKind::Fractal => {
            let theta = args
                .theta
                .ok_or_else(|| CliError::Invalid("fractal needs --theta".into()))?;
            let spec = FractalSpec::new(theta, args.depth)?.with_orientation(args.orientation.into());
            let path = generate_fractal(&spec);
            edges = path.path_edges().into_iter().collect();
            if args.diamonds && args.depth > 0 {
                let span = 5usize.pow(args.depth - 1);
                let v = path.vertices();
                diamonds = (0..5)
                    .map(|m| Diamond::new(v[m * span], v[(m + 1) * span], theta))
                    .collect::<Result<_, _>>()?;
            }
            path.point_set()
        }
        GenKind::Random => {
            let seed = match args.seed {
                Some(s) => s,
                None if checked => {
                    return Err(CliError::Invalid(
                        "--check requires --seed for random point sets".into(),
                    ))
                }
                None => {
                    let s = rand::random();
                    eprintln!("seed: {s}");
                    s
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            PointSet::from_coords((0..args.n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())))?
        }
        GenKind::Grid => {
            let n = args.n;
            PointSet::from_coords((0..n * n).map(|i| ((i % n) as f64, (i / n) as f64)))?
        }
        GenKind::Collinear => PointSet::from_coords((0..args.n).map(|i| (i as f64, 0.0)))?,
    };
    let text = match args
        .out
        .format_or(Format::Csv, &[Format::Csv, Format::Json, Format::Svg])?
    {
        Format::Csv => points_to_csv(&ps),
        Format::Json => GraphFile::new(&ps, &edges).to_json(),
        Format::Svg => graph_svg(&ps, &edges, &diamonds),
    };
    args.out.write(&text)
}

fn graph_for(input: &Input, beta: Option<f64>) -> CliResult<SkeletonGraph> {
    match (beta, &input.graph) {
        (Some(b), _) => Ok(build_k_skeleton(&input.points, b, 1)?),
        (None, Some(g)) => Ok(g.clone()),
        (None, None) => Err(CliError::Invalid("point input needs --beta".into())),
    }
}

fn dilation(args: &DilationArgs) -> CliResult<()> {
    let input = load_input(&args.input)?;
    let g = graph_for(&input, args.beta)?;
    let ps = &input.points;
    let format = args.out.format_or(Format::Json, &[Format::Json, Format::Csv])?;
    let text = match (args.source, args.target) {
        (Some(s), Some(t)) => {
            let d = pair_dilation(&g, ps, s, t)?;
            match format {
                Format::Csv => format!("source,target,dilation\n{s},{t},{d}\n"),
                _ => json_text(&json!({ "source": s, "target": t, "dilation": d })),
            }
        }
        (None, None) => {
            let r = graph_dilation(&g, ps)?;
            match format {
                Format::Csv => format!(
                    "max_dilation,witness_source,witness_target,disconnected_pairs\n{},{},{},{}\n",
                    r.max_dilation, r.witness.0, r.witness.1, r.disconnected_pairs
                ),
                _ => json_text(&json!({
                    "max_dilation": r.max_dilation,
                    "witness": [r.witness.0, r.witness.1],
                    "disconnected_pairs": r.disconnected_pairs,
                })),
            }
        }
        _ => return Err(CliError::Invalid("--source and --target go together".into())),
    };
    args.out.write(&text)
}

struct RouteCheck {
    ratio: f64,
    bound: f64,
    length_gap: f64,
    pruned_leaves: usize,
    pruned_walk: Vec<usize>,
    route: betaskel::RouteResult,
}

fn route_one(g: &SkeletonGraph, ps: &PointSet, beta: f64, s: usize, t: usize) -> CliResult<RouteCheck> {
    let route = greedy_route(g, ps, beta, s, t)?;
    let (pruned, pruned_walk) = prune_tree(&route.tree, ps)?;
    Ok(RouteCheck {
        ratio: route.length / ps.dist(s, t),
        bound: dilation_upper_bound(ps.len(), beta)?,
        length_gap: (route.length - route.boundary_length).abs(),
        pruned_leaves: pruned.leaf_count(),
        pruned_walk,
        route,
    })
}

fn route_violation(c: &RouteCheck, n: usize) -> Option<String> {
    let (s, t) = c.route.tree.root_pair();
    if c.ratio > c.bound {
        Some(format!("{s}->{t}: route ratio {} exceeds bound {}", c.ratio, c.bound))
    } else if c.length_gap > 1e-9 {
        Some(format!("{s}->{t}: route length differs from |T| by {}", c.length_gap))
    } else if c.pruned_leaves > 2 * n {
        Some(format!(
            "{s}->{t}: pruned tree has {} leaves, more than 2n = {}",
            c.pruned_leaves,
            2 * n
        ))
    } else {
        None
    }
}

fn route(args: &RouteArgs, checked: bool) -> CliResult<()> {
    let input = load_input(&args.input)?;
    let ps = &input.points;
    let g = match &input.graph {
        Some(g) => g.clone(),
        None => build_k_skeleton(ps, args.beta, 1)?,
    };
    let n = ps.len();
    let value = if args.all_pairs {
        let (mut worst, mut worst_pair, mut max_leaves, mut count) = (0.0f64, (0, 0), 0, 0);
        let mut bound = 0.0;
        for s in 0..n {
            for t in (0..n).filter(|&t| t != s) {
                let c = route_one(&g, ps, args.beta, s, t)?;
                if checked {
                    if let Some(msg) = route_violation(&c, n) {
                        return Err(CliError::Check(msg));
                    }
                }
                if c.ratio > worst {
                    (worst, worst_pair) = (c.ratio, (s, t));
                }
                max_leaves = max_leaves.max(c.pruned_leaves);
                bound = c.bound;
                count += 1;
            }
        }
        json!({
            "pairs": count,
            "max_ratio": worst,
            "max_ratio_pair": [worst_pair.0, worst_pair.1],
            "upper_bound": bound,
            "max_pruned_leaves": max_leaves,
        })
    } else {
        let (s, t) = (args.source.unwrap(), args.target.unwrap());
        let c = route_one(&g, ps, args.beta, s, t)?;
        if checked {
            if let Some(msg) = route_violation(&c, n) {
                return Err(CliError::Check(msg));
            }
        }
        json!({
            "source": s,
            "target": t,
            "path": c.route.path,
            "length": c.route.length,
            "tree_length": c.route.boundary_length,
            "ratio": c.ratio,
            "upper_bound": c.bound,
            "leaves": c.route.tree.leaf_count(),
            "pruned_leaves": c.pruned_leaves,
            "pruned_walk": c.pruned_walk,
        })
    };
    args.out.format_or(Format::Json, &[Format::Json])?;
    args.out.write(&json_text(&value))
}

fn experiment(cmd: &Experiment, checked: bool) -> CliResult<()> {
    match cmd {
        Experiment::Growth(a) => {
            let report = run_growth_experiment(a.theta, a.beta, a.depth, a.orientation.into())?;
            if checked {
                if let Some(fit) = report.fitted_exponent {
                    let rel = (fit / report.predicted_exponent - 1.0).abs();
                    check(rel <= 0.05, || {
                        format!(
                            "fitted exponent {fit} is {:.1}% off {}",
                            100.0 * rel,
                            report.predicted_exponent
                        )
                    })?;
                }
            }
            let text = match a.out.format_or(Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Json => json_text(&serde_json::to_value(&report).expect("report serializes")),
                _ => report.to_csv(),
            };
            a.out.write(&text)
        }
        Experiment::ExponentCurve(a) => {
            let curve = run_exponent_curve(a.beta_min, a.beta_max, a.steps)?;
            if checked {
                check(curve.windows(2).all(|w| w[1].1 > w[0].1), || {
                    "exponent curve is not increasing".into()
                })?;
            }
            let text = match a.out.format_or(Format::Csv, &[Format::Csv, Format::Svg])? {
                Format::Svg => line_plot_svg(&curve, "β", "upper exponent"),
                _ => curve_to_csv(&curve),
            };
            a.out.write(&text)
        }
        Experiment::Spiral(a) => {
            let rows = run_spiral_experiment(a.theta, &a.counts)?;
            if checked {
                check(rows.windows(2).all(|w| w[1].length > w[0].length), || {
                    "spiral lengths are not increasing".into()
                })?;
                check(rows.iter().all(|r| r.length <= r.limit), || {
                    "a spiral length exceeds the limit".into()
                })?;
                if let Some(last) = rows.last() {
                    check(last.limit - last.length < 1e-3, || {
                        format!(
                            "final spiral length {} is not within 1e-3 of {}",
                            last.length, last.limit
                        )
                    })?;
                }
            }
            let text = match a.out.format_or(Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Json => json_text(&serde_json::to_value(&rows).expect("rows serialize")),
                _ => spiral_to_csv(&rows),
            };
            a.out.write(&text)
        }
    }
}

fn render(args: &RenderArgs) -> CliResult<()> {
    let input = load_input(&args.input)?;
    let ps = &input.points;
    let edges: Vec<(usize, usize)> = match (args.beta, &input.graph) {
        (Some(b), _) => build_k_skeleton(ps, b, 1)?.edges().to_vec(),
        (None, Some(g)) => g.edges().to_vec(),
        (None, None) => Vec::new(),
    };
    let diamonds = match args.theta {
        Some(theta) => edges
            .iter()
            .map(|&(i, j)| Diamond::new(ps.points()[i], ps.points()[j], theta))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    emit(args.output.as_deref(), &graph_svg(ps, &edges, &diamonds))
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => generate(a, cli.check),
        Command::Skeleton(a) => {
            let input = load_input(&a.input)?;
            let g = build_k_skeleton(&input.points, a.beta, a.k)?;
            graph_output(&a.out, &input.points, &g)
        }
        Command::Mst(a) => {
            let input = load_input(&a.input)?;
            graph_output(&a.out, &input.points, &euclidean_mst(&input.points))
        }
        Command::Dilation(a) => dilation(a),
        Command::Route(a) => route(a, cli.check),
        Command::Experiment(e) => experiment(e, cli.check),
        Command::Render(a) => render(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("betaskel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
