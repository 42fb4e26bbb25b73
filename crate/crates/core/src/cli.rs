//! Command-line front end. Exit codes: 0 pass, 1 fail or stuck, 2 usage or
//! input error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::complex::{FreeFacePair, SimplexId, SimplicialComplex, Strategy};
use crate::engine::{run, EngineConfig, RunOutcome};
use crate::error::{Error, Result};
use crate::geodesic::reroute::star_cells;
use crate::geodesic::{
    balance_point_bisection, balance_point_closed_form, reroute_after_collapse, subdivision_oracle, Crossing,
    GeodesicEngine, PiecewisePath, SimplexPoint,
};
use crate::io::{emit_reports, emit_trace, load_complex, point_json, Json};
use crate::metric::MetricAssignment;
use crate::verify::{
    cat0_triangle_sample_check, edge_link_check, four_point_sample_check, homology_necessary_check, property_a_check,
    CheckReport, NeighborhoodSpec, SampleOptions, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "cat0", version, about = "Curvature checks and verified collapses of piecewise-Euclidean complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Sampling {
    /// Samples per sampled check.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allowed relative violation.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Comparison points per side are placed at i/GRID.
    #[arg(long, default_value_t = 4)]
    grid: usize,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    /// Tetrahedron to collapse, as comma-joined labels.
    #[arg(long)]
    sigma: Option<String>,
    /// Its free triangle.
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Prefer3Simplices,
    GreedyLex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a document and run the structural checks.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Edge links, then four-point and triangle sampling on vertex neighbourhoods.
    #[command(name = "check-cat0")]
    CheckCat0 {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        /// Sample only the star of this vertex.
        #[arg(long)]
        center: Option<String>,
        /// Chord radius of the sampled ball; defaults to the whole star.
        #[arg(long)]
        radius: Option<f64>,
        /// Sample the neighbourhood left by collapsing this pair.
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        output: Output,
    },
    /// Look for equal-length replacement channels for a 3-collapse.
    #[command(name = "property-a")]
    PropertyA {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        output: Output,
    },
    /// Geodesic between two points, its reroute after a collapse, or a
    /// balance point on a shared edge.
    Geodesic {
        file: PathBuf,
        /// Start point, e.g. `a,b,c@0.2,0.3,0.5` or a vertex label.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        pair: Pair,
        /// Balance point query: both points lie in triangles sharing this edge.
        #[arg(long)]
        edge: Option<String>,
        #[arg(long, default_value_t = 200)]
        oracle_resolution: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Collapse to a point, verifying each tetrahedron removal.
    Collapse {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, overrides_with = "no_verify")]
        verify: bool,
        #[arg(long = "no-verify", overrides_with = "verify")]
        no_verify: bool,
        /// Also sample after two- and one-dimensional steps.
        #[arg(long)]
        verify_spine: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Prefer3Simplices)]
        strategy: StrategyArg,
        #[command(flatten)]
        output: Output,
    },
}

fn write_out(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn simplex_arg(k: &SimplicialComplex, text: &str) -> Result<SimplexId> {
    let labels: Vec<&str> = text.split(',').map(str::trim).collect();
    k.simplex_from_labels(&labels)
}

fn pair_arg(k: &SimplicialComplex, pair: &Pair) -> Result<Option<FreeFacePair>> {
    match (&pair.sigma, &pair.alpha) {
        (None, None) => Ok(None),
        (Some(s), Some(a)) => Ok(Some(FreeFacePair { coface: simplex_arg(k, s)?, free_face: simplex_arg(k, a)? })),
        _ => Err(Error::MalformedInput("--sigma and --alpha go together".into())),
    }
}

fn overall(reports: &[CheckReport]) -> (&'static str, i32) {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        ("fail", 1)
    } else if reports.iter().all(|r| r.verdict == Verdict::Pass) {
        ("pass", 0)
    } else {
        ("inconclusive", 0)
    }
}

fn finish(k: &SimplicialComplex, reports: &[CheckReport], output: &Output) -> Result<i32> {
    let (verdict, code) = overall(reports);
    write_out(output, &emit_reports(k, verdict, reports))?;
    Ok(code)
}

/// Seed for the neighbourhood of vertex `v`.
fn vertex_seed(seed: u64, v: u32) -> u64 {
    seed ^ ((v as u64 + 1) << 40)
}

fn check_cat0(
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    s: &Sampling,
    center: Option<&str>,
    radius: Option<f64>,
    pair: Option<FreeFacePair>,
) -> Result<Vec<CheckReport>> {
    let mut reports = vec![edge_link_check(k, metric)?];
    let opts = SampleOptions { tol: s.tol, grid: s.grid, ..SampleOptions::default() };
    let specs: Vec<NeighborhoodSpec> = match (pair, center) {
        (Some(p), _) => {
            let mut spec = NeighborhoodSpec::around_collapse(k, metric, p)?;
            if let Some(r) = radius {
                spec = NeighborhoodSpec::new(spec.center, r, spec.removed)?;
            }
            vec![spec]
        }
        (None, Some(c)) => {
            let v = k.vertex_index(c).ok_or_else(|| Error::UnknownVertex(c.to_string()))?;
            let spec = NeighborhoodSpec::full_star(k, metric, v)?;
            vec![NeighborhoodSpec::new(v, radius.unwrap_or(spec.radius), None)?]
        }
        (None, None) => k
            .vertices()
            .into_iter()
            .filter_map(|v| NeighborhoodSpec::full_star(k, metric, v).ok())
            .map(|spec| NeighborhoodSpec::new(spec.center, radius.unwrap_or(spec.radius), None))
            .collect::<Result<_>>()?,
    };
    for spec in specs {
        let seed = vertex_seed(s.seed, spec.center);
        let label = k.label(spec.center).to_string();
        let tag = |r: CheckReport| r.detail("center", &label);
        reports.push(tag(four_point_sample_check(k, metric, spec, s.samples, seed, s.tol)?));
        reports.push(tag(cat0_triangle_sample_check(k, metric, spec, s.samples, seed, opts)?));
    }
    Ok(reports)
}

fn path_json(k: &SimplicialComplex, p: &PiecewisePath) -> Json {
    Json::obj(vec![("length", Json::Num(p.length)), ("points", Json::Arr(p.points.iter().map(|x| point_json(k, x)).collect()))])
}

fn crossing_json(k: &SimplicialComplex, c: &Crossing) -> Json {
    match c {
        Crossing::Interior(p) => Json::obj(vec![("interior", point_json(k, p))]),
        Crossing::NoInteriorCrossing { nearest } => Json::obj(vec![("no_interior_crossing_nearest", Json::str(k.label(*nearest)))]),
    }
}

fn geodesic(
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    from: &str,
    to: &str,
    pair: Option<FreeFacePair>,
    edge: Option<&str>,
    resolution: usize,
) -> Result<Json> {
    let (p, q) = (SimplexPoint::parse(k, from)?, SimplexPoint::parse(k, to)?);
    if let Some(e) = edge {
        let e = simplex_arg(k, e)?;
        let closed = balance_point_closed_form(metric, &p, &q)?;
        let bisected = balance_point_bisection(metric, &p, &q, 50)?;
        return Ok(Json::obj(vec![
            ("query", Json::str("balance_point")),
            ("edge", Json::Arr(e.vertices().iter().map(|&v| Json::str(k.label(v))).collect())),
            ("closed_form", crossing_json(k, &closed)),
            ("bisection", crossing_json(k, &bisected)),
        ]));
    }
    if let Some(pair) = pair {
        let r = reroute_after_collapse(k, metric, pair.coface, pair.free_face, &p, &q)?;
        let after = k.elementary_collapse(&pair)?;
        let oracle = subdivision_oracle(metric, &star_cells(&after, r.roles.a), &p, &q, resolution)?;
        return Ok(Json::obj(vec![
            ("query", Json::str("reroute")),
            ("channel", Json::str(r.channel.as_str())),
            ("margin", Json::Num(r.margin)),
            ("tie", Json::Bool(r.flags.tie)),
            ("original_length", Json::Num(r.crossing.original_length)),
            ("chosen", path_json(k, &r.chosen)),
            ("alternative", path_json(k, &r.alternative)),
            ("oracle_length", Json::Num(oracle.length)),
            ("oracle_resolution", Json::Int(resolution as i64)),
        ]));
    }
    let path = GeodesicEngine::new(k, metric)?.geodesic(&p, &q)?;
    Ok(Json::obj(vec![("query", Json::str("geodesic")), ("path", path_json(k, &path))]))
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { file, output } => {
            let (k, metric) = load_complex(&file)?;
            let reports = vec![homology_necessary_check(&k), edge_link_check(&k, &metric)?];
            finish(&k, &reports, &output)
        }
        Command::CheckCat0 { file, sampling, center, radius, pair, output } => {
            let (k, metric) = load_complex(&file)?;
            let pair = pair_arg(&k, &pair)?;
            let reports = check_cat0(&k, &metric, &sampling, center.as_deref(), radius, pair)?;
            finish(&k, &reports, &output)
        }
        Command::PropertyA { file, sampling, pair, output } => {
            let (k, metric) = load_complex(&file)?;
            let pair = match pair_arg(&k, &pair)? {
                Some(p) => p,
                None => k
                    .free_faces()
                    .into_iter()
                    .find(|p| p.coface.dim() == 3)
                    .ok_or_else(|| Error::UnsupportedConfiguration("no tetrahedron has a free face".into()))?,
            };
            let r = property_a_check(&k, &metric, pair.coface, pair.free_face, sampling.samples, sampling.seed)?;
            finish(&k, &[r], &output)
        }
        Command::Geodesic { file, from, to, pair, edge, oracle_resolution, output } => {
            let (k, metric) = load_complex(&file)?;
            let pair = pair_arg(&k, &pair)?;
            let json = geodesic(&k, &metric, &from, &to, pair, edge.as_deref(), oracle_resolution)?;
            write_out(&output, &json.render())?;
            Ok(0)
        }
        Command::Collapse { file, sampling, verify, no_verify, verify_spine, strategy, output } => {
            let (k, metric) = load_complex(&file)?;
            let config = EngineConfig {
                verify_each_step: verify || !no_verify,
                verify_spine,
                n_samples: sampling.samples,
                seed: sampling.seed,
                tol: sampling.tol,
                grid: sampling.grid,
                strategy: match strategy {
                    StrategyArg::Prefer3Simplices => Strategy::Prefer3Simplices,
                    StrategyArg::GreedyLex => Strategy::GreedyLex,
                },
            };
            let t = run(&k, &metric, &config)?;
            write_out(&output, &emit_trace(&t))?;
            Ok(if t.outcome == RunOutcome::CollapsedToPoint { 0 } else { 1 })
        }
    }
}

/// Runs the CLI on `args` (without the program name) and returns the exit code.
pub fn cli_dispatch<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("cat0".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
