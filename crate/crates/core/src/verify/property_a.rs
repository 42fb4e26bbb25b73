//! Detector for equal-length replacement geodesics through different
//! boundary edges of a collapsed tetrahedron.

use std::collections::BTreeMap;

use super::neighborhood::{Neighborhood, NeighborhoodSpec, SampleDomain};
use super::report::{CheckReport, Verdict, Witness};
use super::sampling::{par_map, sample_rng};
use crate::complex::{FreeFacePair, SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geodesic::reroute::reroute_with;
use crate::geodesic::{RerouteResult, SimplexPoint};
use crate::metric::MetricAssignment;

/// Channel margins within this fraction of the neighbourhood diameter count
/// as equal.
pub const EQUALITY_TOL: f64 = 1e-7;
/// Bisection stops once the margin is this small relative to the radius.
const TIE_TOL: f64 = 1e-12;
const BISECTION_STEPS: usize = 80;
/// Opposite-sign neighbours bisected per crossing class.
const BISECTIONS_PER_CLASS: usize = 8;

/// Roles that must agree for two samples to be joined by bisection.
type Class = (SimplexId, SimplexId, SimplexId, SimplexId);

struct Sample {
    index: usize,
    p: SimplexPoint,
    q: SimplexPoint,
    /// `around − direct`.
    signed: f64,
    class: Class,
}

enum Draw {
    Crossing(Sample),
    NoCrossing,
    Unsupported,
    NoPoint,
}

fn class_of(r: &RerouteResult) -> Class {
    (r.roles.cell_p, r.roles.cell_q, r.roles.tau[0], r.roles.tau[1])
}

struct Ctx<'a> {
    hood: &'a Neighborhood,
    pair: FreeFacePair,
}

impl Ctx<'_> {
    fn reroute(&self, p: &SimplexPoint, q: &SimplexPoint) -> Result<RerouteResult> {
        let engine = self.hood.engine_before.as_ref().expect("neighbourhood of a collapse");
        reroute_with(engine, &self.hood.before, &self.hood.metric, self.pair.coface, self.pair.free_face, p, q)
    }

    fn draw(&self, seed: u64, index: usize) -> Draw {
        let mut rng = sample_rng(seed, index as u64);
        let (Some(p), Some(q)) = (self.hood.sample_point(&mut rng), self.hood.sample_point(&mut rng)) else {
            return Draw::NoPoint;
        };
        match self.reroute(&p, &q) {
            Ok(r) => Draw::Crossing(Sample { index, p, q, signed: r.around.length - r.direct.length, class: class_of(&r) }),
            Err(Error::NoInteriorCrossing) => Draw::NoCrossing,
            Err(_) => Draw::Unsupported,
        }
    }

    /// Signed margin at fraction `t` between two samples of one class.
    fn margin_between(&self, a: &Sample, b: &Sample, t: f64) -> Option<(SimplexPoint, SimplexPoint, f64)> {
        let p = SimplexPoint::lerp_in(&a.class.0, &a.p, &b.p, t)?;
        let q = SimplexPoint::lerp_in(&a.class.1, &a.q, &b.q, t)?;
        let r = self.reroute(&p, &q).ok()?;
        (class_of(&r) == a.class).then_some((p, q, r.around.length - r.direct.length))
    }

    /// Locates a sign change of the margin between `a` and `b`.
    fn bisect(&self, a: &Sample, b: &Sample, scale: f64) -> Option<(SimplexPoint, SimplexPoint, f64)> {
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut best: Option<(SimplexPoint, SimplexPoint, f64)> = None;
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let (p, q, m) = self.margin_between(a, b, mid)?;
            if best.as_ref().is_none_or(|x| m.abs() < x.2.abs()) {
                best = Some((p, q, m));
            }
            if m.abs() <= TIE_TOL * scale {
                break;
            }
            if (m > 0.0) == (a.signed > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best
    }
}

/// Samples pairs `p, q` outside `σ` whose old geodesic crosses `σ` and looks
/// for equal direct and around channels after collapsing `(σ, α)`.
pub fn property_a_check(
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    sigma: SimplexId,
    alpha: SimplexId,
    n_samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    const NAME: &str = "property_a";
    let pair = FreeFacePair { coface: sigma, free_face: alpha };
    let spec = NeighborhoodSpec::around_collapse(k, metric, pair)?;
    let hood = Neighborhood::build(k, metric, spec, SampleDomain::ExcludeRemoved)?;
    let ctx = Ctx { hood: &hood, pair };
    let diameter = 2.0 * spec.radius;
    let draws = par_map(n_samples, |i| ctx.draw(seed, i));
    let (mut none, mut unsupported, mut no_point) = (0usize, 0usize, 0usize);
    let mut samples = Vec::new();
    for d in draws {
        match d {
            Draw::Crossing(s) => samples.push(s),
            Draw::NoCrossing => none += 1,
            Draw::Unsupported => unsupported += 1,
            Draw::NoPoint => no_point += 1,
        }
    }
    let base = |v: Verdict, w: f64| {
        CheckReport::new(NAME, v, w)
            .detail("samples", n_samples)
            .detail("crossing_samples", samples.len())
            .detail("non_crossing_samples", none)
            .detail("unsupported_crossings", unsupported)
            .detail("samples_without_point", no_point)
    };
    if samples.is_empty() {
        return Ok(base(Verdict::Inconclusive, 0.0).detail("guidance", "no sampled geodesic crossed the tetrahedron; increase the sample count"));
    }
    // Closest sampled margin, then ties located between opposite signs.
    let mut best: (f64, SimplexPoint, SimplexPoint, &'static str) = (f64::INFINITY, samples[0].p, samples[0].q, "sampled");
    for s in &samples {
        if s.signed.abs() < best.0 {
            best = (s.signed.abs(), s.p, s.q, "sampled");
        }
    }
    let mut classes: BTreeMap<Class, Vec<&Sample>> = BTreeMap::new();
    for s in &samples {
        classes.entry(s.class).or_default().push(s);
    }
    let mut jobs = Vec::new();
    for members in classes.values() {
        let mut taken = 0;
        for w in members.windows(2) {
            if taken == BISECTIONS_PER_CLASS {
                break;
            }
            if (w[0].signed > 0.0) != (w[1].signed > 0.0) {
                jobs.push((w[0], w[1]));
                taken += 1;
            }
        }
    }
    let found = par_map(jobs.len(), |i| ctx.bisect(jobs[i].0, jobs[i].1, spec.radius));
    for (p, q, m) in found.into_iter().flatten() {
        if m.abs() < best.0 {
            best = (m.abs(), p, q, "bisected");
        }
    }
    let (min_margin, p, q, how) = best;
    let tol = EQUALITY_TOL * diameter;
    let verdict = if min_margin <= tol { Verdict::Fail } else { Verdict::Pass };
    let mut report = base(verdict, (tol - min_margin).max(0.0))
        .detail("min_abs_margin", format!("{min_margin:.17e}"))
        .detail("equality_tolerance", format!("{tol:.17e}"))
        .detail("bisections", jobs.len())
        .detail("first_crossing_index", samples[0].index);
    if verdict == Verdict::Fail {
        let r = ctx.reroute(&p, &q)?;
        let after = hood.engine_after.distance(&p, &q).ok();
        let mut values = vec![
            ("direct_length".into(), r.direct.length),
            ("around_length".into(), r.around.length),
            ("margin".into(), min_margin),
        ];
        if let Some(d) = after {
            values.push(("distance_after_collapse".into(), d));
        }
        report = report.with_witness(Witness {
            description: format!("direct and around channels tie ({how})"),
            points: vec![("p".into(), p), ("q".into(), q)],
            simplices: vec![sigma, alpha, r.roles.edges[0], r.roles.edges[1], r.roles.edges[2]],
            values,
        });
    }
    Ok(report)
}
