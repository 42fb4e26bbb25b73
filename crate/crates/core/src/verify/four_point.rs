//! Sampled four-point condition on a neighbourhood.

use super::neighborhood::{Neighborhood, NeighborhoodSpec, SampleDomain};
use super::report::{CheckReport, Verdict, Witness};
use super::sampling::{par_map, sample_rng};
use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::geodesic::SimplexPoint;
use crate::metric::{subembedding_check, FourTuple, MetricAssignment};

/// The three ways to split four points into two diagonals, as orders
/// `x₁, y₁, x₂, y₂`.
const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2]];

struct Sample {
    pts: [SimplexPoint; 4],
    /// Most negative diagonal slack over the pairings, relative to the radius.
    violation: f64,
    pairing: usize,
}

fn sample(hood: &Neighborhood, seed: u64, index: usize, tol: f64) -> Option<Sample> {
    let mut rng = sample_rng(seed, index as u64);
    let mut pts = [SimplexPoint::vertex(0); 4];
    for p in pts.iter_mut() {
        *p = hood.sample_point(&mut rng)?;
    }
    let mut d = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            let v = hood.engine_after.distance(&pts[i], &pts[j]).ok()?;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    let mut worst = Sample { pts, violation: f64::NEG_INFINITY, pairing: 0 };
    for (k, order) in PAIRINGS.iter().enumerate() {
        let t = FourTuple::from_fn(|i, j| d[order[i]][order[j]]).ok()?;
        let s = subembedding_check(&t, tol);
        let v = if s.exists { 0.0 } else { -s.slack[0].min(s.slack[1]) / hood.spec.radius };
        if v > worst.violation {
            worst.violation = v;
            worst.pairing = k;
        }
    }
    Some(worst)
}

/// Samples four-point configurations and looks for one without a
/// subembedding under some pairing.
pub fn four_point_sample_check(
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    spec: NeighborhoodSpec,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    const NAME: &str = "four_point_sample";
    let hood = Neighborhood::build(k, metric, spec, SampleDomain::ExcludeRemoved)?;
    if hood.domain_cells.is_empty() || n_samples == 0 {
        return Ok(CheckReport::new(NAME, Verdict::Inconclusive, 0.0).detail("reason", "empty sampling domain"));
    }
    let samples = par_map(n_samples, |i| sample(&hood, seed, i, tol));
    let inconclusive = samples.iter().filter(|s| s.is_none()).count();
    let mut worst: Option<&Sample> = None;
    let mut failures = 0usize;
    for s in samples.iter().flatten() {
        if s.violation > 0.0 {
            failures += 1;
        }
        if worst.is_none_or(|w| s.violation > w.violation) {
            worst = Some(s);
        }
    }
    let Some(w) = worst else {
        return Ok(CheckReport::new(NAME, Verdict::Inconclusive, 0.0).detail("samples_inconclusive", inconclusive));
    };
    let violation = w.violation.max(0.0);
    let verdict = if failures > 0 { Verdict::Fail } else { Verdict::Pass };
    let mut report = CheckReport::new(NAME, verdict, violation)
        .detail("samples_evaluated", n_samples - inconclusive)
        .detail("samples_inconclusive", inconclusive)
        .detail("tuples_without_subembedding", failures);
    if verdict == Verdict::Fail {
        let order = PAIRINGS[w.pairing];
        let names = ["x1", "y1", "x2", "y2"];
        report = report.with_witness(Witness {
            description: "four points with no planar subembedding".into(),
            points: (0..4).map(|i| (names[i].to_string(), w.pts[order[i]])).collect(),
            simplices: vec![],
            values: vec![("relative_diagonal_deficit".into(), violation)],
        });
    }
    Ok(report)
}
