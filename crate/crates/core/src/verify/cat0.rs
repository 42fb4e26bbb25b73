//! Sampled CAT(0) comparison inequality on a neighbourhood.

use std::collections::BTreeMap;

use super::neighborhood::{Neighborhood, NeighborhoodSpec, SampleDomain};
use super::report::{CheckReport, Verdict, Witness};
use super::sampling::{par_map, sample_rng};
use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::Result;
use crate::geodesic::midpoint::meets_interior;
use crate::geodesic::reroute::reroute_with;
use crate::geodesic::{Channel, PiecewisePath, SimplexPoint};
use crate::metric::comparison::lerp2;
use crate::metric::{comparison_points, MetricAssignment};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleOptions {
    /// Allowed violation, relative to the neighbourhood radius.
    pub tol: f64,
    pub domain: SampleDomain,
    /// Comparison points sit at `i / grid` along two sides; 4 gives quartiles.
    pub grid: usize,
    /// Oversample to give every crossing pattern a quota.
    pub stratify: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { tol: 1e-7, domain: SampleDomain::ExcludeRemoved, grid: 4, stratify: true }
    }
}

/// How the sides of a sampled triangle met the removed tetrahedron before
/// the collapse, and which channel their replacements use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    NoCrossing,
    OneSideDirect,
    OneSideAround,
    TwoSidesDirectSamePair,
    TwoSidesDirectAdjacentPairs,
    TwoSidesMixedSamePair,
    TwoSidesMixedAdjacentPairs,
    TwoSidesAround,
    ThreeSides,
    /// A crossing the reroute construction does not cover.
    Irregular,
}

impl Stratum {
    pub const CROSSING: [Stratum; 8] = [
        Stratum::OneSideDirect,
        Stratum::OneSideAround,
        Stratum::TwoSidesDirectSamePair,
        Stratum::TwoSidesDirectAdjacentPairs,
        Stratum::TwoSidesMixedSamePair,
        Stratum::TwoSidesMixedAdjacentPairs,
        Stratum::TwoSidesAround,
        Stratum::ThreeSides,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Stratum::NoCrossing => "no_crossing",
            Stratum::OneSideDirect => "one_side_direct",
            Stratum::OneSideAround => "one_side_around",
            Stratum::TwoSidesDirectSamePair => "two_sides_direct_same_pair",
            Stratum::TwoSidesDirectAdjacentPairs => "two_sides_direct_adjacent_pairs",
            Stratum::TwoSidesMixedSamePair => "two_sides_mixed_same_pair",
            Stratum::TwoSidesMixedAdjacentPairs => "two_sides_mixed_adjacent_pairs",
            Stratum::TwoSidesAround => "two_sides_around",
            Stratum::ThreeSides => "three_sides",
            Stratum::Irregular => "irregular",
        }
    }
}

type SideCrossing = Option<(Channel, [SimplexId; 2])>;

fn classify(sides: &[SideCrossing]) -> Stratum {
    let crossing: Vec<_> = sides.iter().flatten().collect();
    match crossing.as_slice() {
        [] => Stratum::NoCrossing,
        [(ch, _)] => match ch {
            Channel::ThroughS => Stratum::OneSideDirect,
            Channel::ThroughTV => Stratum::OneSideAround,
        },
        [(c1, f1), (c2, f2)] => {
            let same = f1 == f2;
            match (c1, c2, same) {
                (Channel::ThroughS, Channel::ThroughS, true) => Stratum::TwoSidesDirectSamePair,
                (Channel::ThroughS, Channel::ThroughS, false) => Stratum::TwoSidesDirectAdjacentPairs,
                (Channel::ThroughTV, Channel::ThroughTV, _) => Stratum::TwoSidesAround,
                (_, _, true) => Stratum::TwoSidesMixedSamePair,
                (_, _, false) => Stratum::TwoSidesMixedAdjacentPairs,
            }
        }
        _ => Stratum::ThreeSides,
    }
}

/// A sampled triangle with its sides after the collapse.
struct Candidate {
    pts: [SimplexPoint; 3],
    sides: [PiecewisePath; 3],
    stratum: Stratum,
}

enum Attempt {
    Ready(Box<Candidate>),
    /// No geodesic or reroute could be formed.
    Inconclusive,
    /// Rejection sampling gave up.
    NoPoint,
}

struct Outcome {
    violation: f64,
    witness: Option<(SimplexPoint, SimplexPoint, f64, f64)>,
}

impl Neighborhood {
    fn side_crossing(&self, x: &SimplexPoint, y: &SimplexPoint) -> Result<SideCrossing> {
        let (Some(pair), Some(engine)) = (self.spec.removed, &self.engine_before) else { return Ok(None) };
        let old = engine.geodesic(x, y)?;
        if !meets_interior(&old, &pair.coface) {
            return Ok(None);
        }
        let r = reroute_with(engine, &self.before, &self.metric, pair.coface, pair.free_face, x, y)?;
        let mut faces = [r.roles.tau[0], r.roles.tau[1]];
        faces.sort();
        Ok(Some((r.channel, faces)))
    }

    fn attempt(&self, seed: u64, index: usize, classify_sides: bool) -> Attempt {
        let mut rng = sample_rng(seed, index as u64);
        let mut pts = Vec::with_capacity(3);
        for _ in 0..3 {
            match self.sample_point(&mut rng) {
                Some(x) => pts.push(x),
                None => return Attempt::NoPoint,
            }
        }
        let pts = [pts[0], pts[1], pts[2]];
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let mut sides = Vec::with_capacity(3);
        for (i, j) in pairs {
            match self.engine_after.geodesic(&pts[i], &pts[j]) {
                Ok(side) => sides.push(side),
                Err(_) => return Attempt::Inconclusive,
            }
        }
        let stratum = if classify_sides {
            pairs
                .iter()
                .map(|&(i, j)| self.side_crossing(&pts[i], &pts[j]))
                .collect::<Result<Vec<_>>>()
                .map_or(Stratum::Irregular, |c| classify(&c))
        } else {
            Stratum::NoCrossing
        };
        let sides = [sides[0].clone(), sides[1].clone(), sides[2].clone()];
        Attempt::Ready(Box::new(Candidate { pts, sides, stratum }))
    }

    /// Comparison inequality at the grid points of sides `[p,q]` and `[p,r]`.
    fn evaluate(&self, c: &Candidate, grid: usize) -> Option<Outcome> {
        let [pq, pr, qr] = &c.sides;
        let (lpq, lpr, lqr) = (pq.length, pr.length, qr.length);
        if lpq <= 0.0 || lpr <= 0.0 {
            return Some(Outcome { violation: 0.0, witness: None });
        }
        let [pb, qb, rb] = comparison_points(lpq, lqr, lpr);
        let mut worst = Outcome { violation: f64::NEG_INFINITY, witness: None };
        for i in 1..grid {
            let ti = i as f64 / grid as f64;
            let x = pq.point_at(ti, &self.metric).ok()?;
            let xb = lerp2(&pb, &qb, ti);
            for j in i..grid {
                let tj = j as f64 / grid as f64;
                let y = pr.point_at(tj, &self.metric).ok()?;
                let yb = lerp2(&pb, &rb, tj);
                let d = self.engine_after.distance(&x, &y).ok()?;
                let db = (xb - yb).norm();
                let v = (d - db) / self.spec.radius;
                if v > worst.violation {
                    worst = Outcome { violation: v, witness: Some((x, y, d, db)) };
                }
            }
        }
        Some(worst)
    }
}

/// Samples `n_samples` geodesic triangles in the neighbourhood and checks
/// the comparison inequality on each.
pub fn cat0_triangle_sample_check(
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    spec: NeighborhoodSpec,
    n_samples: usize,
    seed: u64,
    opts: SampleOptions,
) -> Result<CheckReport> {
    let hood = Neighborhood::build(k, metric, spec, opts.domain)?;
    Ok(check_on(&hood, n_samples, seed, opts))
}

fn check_on(hood: &Neighborhood, n_samples: usize, seed: u64, opts: SampleOptions) -> CheckReport {
    const NAME: &str = "cat0_triangle_sample";
    if hood.domain_cells.is_empty() || n_samples == 0 {
        return CheckReport::new(NAME, Verdict::Inconclusive, 0.0).detail("reason", "empty sampling domain");
    }
    let crossings_possible = hood.face_neighbours() >= 2;
    let stratified = opts.stratify && crossings_possible;
    let budget = if stratified { 4 * n_samples } else { n_samples };
    let quota = n_samples.div_ceil(9);
    let mut buckets: BTreeMap<Stratum, Vec<Box<Candidate>>> = BTreeMap::new();
    let mut reserve: Vec<Box<Candidate>> = Vec::new();
    let mut seen: BTreeMap<Stratum, usize> = BTreeMap::new();
    let (mut inconclusive, mut no_point, mut done) = (0usize, 0usize, 0usize);
    while done < budget {
        let chunk = n_samples.min(budget - done);
        let start = done;
        let attempts = par_map(chunk, |i| hood.attempt(seed, start + i, crossings_possible));
        done += chunk;
        for a in attempts {
            match a {
                Attempt::NoPoint => no_point += 1,
                Attempt::Inconclusive => inconclusive += 1,
                Attempt::Ready(c) => {
                    *seen.entry(c.stratum).or_default() += 1;
                    let b = buckets.entry(c.stratum).or_default();
                    if b.len() < quota || !stratified {
                        b.push(c);
                    } else {
                        reserve.push(c);
                    }
                }
            }
        }
        let full = Stratum::CROSSING.iter().all(|s| buckets.get(s).is_some_and(|b| b.len() >= quota));
        if !stratified || full {
            break;
        }
    }
    let mut selected: Vec<Box<Candidate>> = buckets.into_values().flatten().collect();
    if stratified {
        // Quota buckets hold more than needed only when a stratum dominates.
        selected.truncate(n_samples);
        let room = n_samples.saturating_sub(selected.len());
        selected.extend(reserve.into_iter().take(room));
    }
    let irregular = selected.iter().filter(|c| c.stratum == Stratum::Irregular).count();
    let outcomes = par_map(selected.len(), |i| hood.evaluate(&selected[i], opts.grid.max(2)));
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut evaluated = 0usize;
    for (c, o) in selected.iter().zip(outcomes) {
        let Some(o) = o else {
            inconclusive += 1;
            continue;
        };
        evaluated += 1;
        if o.violation > worst {
            worst = o.violation;
            witness = o.witness.map(|w| (c, w));
        }
    }
    let worst = worst.max(0.0);
    let verdict = if evaluated == 0 {
        Verdict::Inconclusive
    } else if worst > opts.tol {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let mut report = CheckReport::new(NAME, verdict, worst)
        .detail("samples_evaluated", evaluated)
        .detail("samples_inconclusive", inconclusive)
        .detail("samples_without_point", no_point)
        .detail("attempts", done)
        .detail("irregular_crossings", irregular);
    if crossings_possible {
        let empty: Vec<&str> = Stratum::CROSSING.iter().filter(|s| !seen.contains_key(s)).map(|s| s.as_str()).collect();
        for s in std::iter::once(Stratum::NoCrossing).chain(Stratum::CROSSING) {
            report = report.detail(&format!("stratum.{}", s.as_str()), seen.get(&s).copied().unwrap_or(0));
        }
        report = report.detail("empty_strata", if empty.is_empty() { "none".to_string() } else { empty.join(",") });
    } else {
        report = report.detail("empty_strata", "all crossing strata (fewer than two faces glued to the removed tetrahedron)");
    }
    if verdict == Verdict::Fail {
        if let Some((c, (x, y, d, db))) = witness {
            report = report.with_witness(Witness {
                description: format!("comparison inequality fails on a {} triangle", c.stratum.as_str()),
                points: vec![
                    ("p".into(), c.pts[0]),
                    ("q".into(), c.pts[1]),
                    ("r".into(), c.pts[2]),
                    ("x".into(), x),
                    ("y".into(), y),
                ],
                simplices: hood.sigma().into_iter().collect(),
                values: vec![("d(x,y)".into(), d), ("comparison".into(), db), ("relative_violation".into(), worst)],
            });
        }
    }
    report
}
