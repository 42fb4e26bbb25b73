use super::engine::GeodesicEngine;
use super::{PiecewisePath, SimplexPoint};
use crate::complex::SimplexId;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum MidpointOutcome {
    /// `m` at arclength fraction `t` of the path.
    Found { m: SimplexPoint, t: f64, to_p: PiecewisePath, to_q: PiecewisePath },
    ResolutionExhausted { scanned: usize },
}

/// A path meets the open simplex `sigma` when one of its segments spans it.
pub(crate) fn meets_interior(path: &PiecewisePath, sigma: &SimplexId) -> bool {
    path.points.windows(2).any(|w| w[0].support().union(&w[1].support()) == Some(*sigma))
        || path.points.iter().any(|p| p.support() == *sigma)
}

/// Scans a path avoiding the open simplex `sigma` for a point `m` whose
/// geodesics to both endpoints avoid it as well.
///
/// Candidates are taken at fractions `i / resolution`, starting from the
/// middle and moving outward.
pub fn safe_midpoint(engine: &GeodesicEngine, path: &PiecewisePath, sigma: SimplexId, resolution: usize) -> Result<MidpointOutcome> {
    let (p, q) = (*path.start(), *path.end());
    if p.in_closed(&sigma) || q.in_closed(&sigma) {
        return Err(Error::DegenerateInput("the endpoints must lie outside the closed simplex".into()));
    }
    if meets_interior(path, &sigma) {
        return Err(Error::DegenerateInput("the path meets the open simplex".into()));
    }
    let n = resolution.max(2);
    let half = n / 2;
    let mut order = vec![half];
    for k in 1..=half {
        order.push(half - k);
        if half + k <= n {
            order.push(half + k);
        }
    }
    for i in order {
        let t = i as f64 / n as f64;
        let m = path.point_at(t, engine.metric())?;
        let to_p = engine.geodesic(&m, &p)?;
        if meets_interior(&to_p, &sigma) {
            continue;
        }
        let to_q = engine.geodesic(&m, &q)?;
        if !meets_interior(&to_q, &sigma) {
            return Ok(MidpointOutcome::Found { m, t, to_p, to_q });
        }
    }
    Ok(MidpointOutcome::ResolutionExhausted { scanned: n + 1 })
}
