//! Collapse to a point, tetrahedra first, with the neighbourhood of every
//! removed tetrahedron checked on the way.

use crate::complex::{CollapseTrace, FreeFacePair, SimplicialComplex, Strategy};
use crate::error::{Error, Result};
use crate::metric::MetricAssignment;
use crate::verify::{
    cat0_triangle_sample_check, property_a_check, CheckReport, NeighborhoodSpec, SampleDomain, SampleOptions,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub verify_each_step: bool,
    /// Also sample the star of the surviving vertex after lower-dimensional steps.
    pub verify_spine: bool,
    pub n_samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub grid: usize,
    pub strategy: Strategy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            verify_each_step: true,
            verify_spine: false,
            n_samples: 1000,
            seed: 0,
            tol: 1e-7,
            grid: 4,
            strategy: Strategy::Prefer3Simplices,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    CollapsedToPoint,
    StuckNoFreeFace,
    VerificationFailed,
}

impl RunOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunOutcome::CollapsedToPoint => "collapsed_to_point",
            RunOutcome::StuckNoFreeFace => "stuck_no_free_face",
            RunOutcome::VerificationFailed => "verification_failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifiedTrace {
    /// Steps with one report list each.
    pub trace: CollapseTrace,
    pub outcome: RunOutcome,
    /// The complex the run stopped on, when it did not reach a point.
    pub stuck: Option<SimplicialComplex>,
    pub metadata: Vec<(String, String)>,
}

impl VerifiedTrace {
    pub fn reports(&self) -> &[Vec<CheckReport>] {
        &self.trace.verification_reports
    }
}

/// Remark stored with every trace.
pub const DEPARTURE_NOTE: &str = "purely simplicial: no continuous retraction or retraction centre is tracked; \
     each tetrahedron is removed by one elementary collapse and only its neighbourhood is re-verified";

/// First free pair whose coface is a tetrahedron; both strategies agree here.
fn three_pair(k: &SimplicialComplex) -> Option<FreeFacePair> {
    k.free_faces().into_iter().find(|p| p.coface.dim() == 3)
}

fn sample_options(config: &EngineConfig) -> SampleOptions {
    SampleOptions { tol: config.tol, grid: config.grid, ..SampleOptions::default() }
}

/// Reports for removing `pair` from `k`: the equal-channel detector before,
/// the comparison inequality on the new neighbourhood after.
fn verify_three_step(k: &SimplicialComplex, metric: &MetricAssignment, pair: FreeFacePair, config: &EngineConfig) -> Result<Vec<CheckReport>> {
    let a = property_a_check(k, metric, pair.coface, pair.free_face, config.n_samples, config.seed)?;
    let spec = NeighborhoodSpec::around_collapse(k, metric, pair)?;
    let c = cat0_triangle_sample_check(k, metric, spec, config.n_samples, config.seed, sample_options(config))?;
    Ok(vec![a, c])
}

fn verify_low_step(after: &SimplicialComplex, metric: &MetricAssignment, pair: FreeFacePair, config: &EngineConfig) -> Result<Vec<CheckReport>> {
    let v = pair.coface.opposite(&pair.free_face).expect("free face is a facet");
    let spec = NeighborhoodSpec::full_star(after, metric, v);
    let Ok(spec) = spec else { return Ok(vec![]) };
    let opts = SampleOptions { domain: SampleDomain::IncludeBoundary, ..sample_options(config) };
    Ok(vec![cat0_triangle_sample_check(after, metric, spec, config.n_samples, config.seed, opts)?])
}

/// Collapses `k` to a point: free tetrahedra while any remain, then the
/// two-dimensional spine under `config.strategy`.
pub fn run(k: &SimplicialComplex, metric: &MetricAssignment, config: &EngineConfig) -> Result<VerifiedTrace> {
    if config.verify_each_step && config.n_samples == 0 {
        return Err(Error::Domain("verification needs at least one sample".into()));
    }
    metric.validate(k)?;
    let mut trace = CollapseTrace::new(k.clone());
    let mut cur = k.clone();
    let mut metadata = vec![
        ("strategy".to_string(), config.strategy.name().to_string()),
        ("verify_each_step".to_string(), config.verify_each_step.to_string()),
        ("verify_spine".to_string(), config.verify_spine.to_string()),
        ("departure".to_string(), DEPARTURE_NOTE.to_string()),
    ];
    let finish = |trace, outcome, cur: SimplicialComplex, metadata| {
        let stuck = (outcome != RunOutcome::CollapsedToPoint).then_some(cur);
        Ok(VerifiedTrace { trace, outcome, stuck, metadata })
    };
    // Tetrahedra first.
    while cur.count_by_dim()[3] > 0 {
        let Some(pair) = three_pair(&cur) else {
            metadata.push((
                "note".into(),
                "tetrahedra remain but none has a free face; unexpected for a strongly convex nonpositively curved metric".into(),
            ));
            return finish(trace, RunOutcome::StuckNoFreeFace, cur, metadata);
        };
        let reports = if config.verify_each_step { verify_three_step(&cur, metric, pair, config)? } else { vec![] };
        cur.collapse_in_place(&pair)?;
        let failed = reports.iter().any(|r| r.failed());
        trace.steps.push(pair);
        trace.verification_reports.push(reports);
        if failed {
            return finish(trace, RunOutcome::VerificationFailed, cur, metadata);
        }
    }
    metadata.push(("spine_step".into(), trace.steps.len().to_string()));
    while cur.len() > 1 {
        let Some(pair) = config.strategy.select(&cur) else {
            return finish(trace, RunOutcome::StuckNoFreeFace, cur, metadata);
        };
        cur.collapse_in_place(&pair)?;
        let reports = if config.verify_each_step && config.verify_spine { verify_low_step(&cur, metric, pair, config)? } else { vec![] };
        let failed = reports.iter().any(|r| r.failed());
        trace.steps.push(pair);
        trace.verification_reports.push(reports);
        if failed {
            return finish(trace, RunOutcome::VerificationFailed, cur, metadata);
        }
    }
    if cur.is_empty() {
        return finish(trace, RunOutcome::StuckNoFreeFace, cur, metadata);
    }
    finish(trace, RunOutcome::CollapsedToPoint, cur, metadata)
}

/// The complex left once no tetrahedron has a free face.
pub fn spine(k: &SimplicialComplex) -> SimplicialComplex {
    let mut cur = k.clone();
    while let Some(pair) = three_pair(&cur) {
        cur.collapse_in_place(&pair).expect("selected pair is free");
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn tetrahedron_unverified() {
        let k = build_complex(&[vec!["a", "b", "c", "d"]]).unwrap();
        let cfg = EngineConfig { verify_each_step: false, ..EngineConfig::default() };
        let t = run(&k, &MetricAssignment::standard(&k), &cfg).unwrap();
        assert_eq!(t.outcome, RunOutcome::CollapsedToPoint);
        assert_eq!(t.trace.steps.len(), 7);
        let s = spine(&k);
        assert_eq!(s.len(), 13);
        assert_eq!(spine(&s), s);
    }
}
