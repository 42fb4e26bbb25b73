//! The point of a shared edge through which a shortest path between two
//! hinged triangles passes, and the inequalities around it.

use std::f64::consts::PI;

use super::unfold::apex_2d;
use super::{chord, SimplexPoint};
use crate::error::{Error, Result};
use crate::metric::{alexandrov_angle_estimate, comparison_angle, realize_triangle, MetricAssignment, Point2};

/// Outcome of a balance-point query on an edge `ab`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing {
    /// The point of the open edge.
    Interior(SimplexPoint),
    /// The unfolded chord misses the open edge; `nearest` is the closer end.
    NoInteriorCrossing { nearest: u32 },
}

impl Crossing {
    pub fn point(&self) -> Option<SimplexPoint> {
        match self {
            Crossing::Interior(p) => Some(*p),
            Crossing::NoInteriorCrossing { .. } => None,
        }
    }
}

/// Parameter `t` (from `a` toward `b`) where the chord between the two
/// unfolded apexes meets the line of `ab`. Values outside `(0, 1)` mean the
/// chord misses the open edge.
///
/// `p` is at distances `pa`, `pb` and `q` at `qa`, `qb`; the two triangles
/// are laid on opposite sides of `ab`.
pub fn balance_from_distances(ab: f64, pa: f64, pb: f64, qa: f64, qb: f64) -> f64 {
    let (a, b) = (Point2::zeros(), Point2::new(ab, 0.0));
    let p = apex_2d(&a, &b, pa, pb, 1.0);
    let q = apex_2d(&a, &b, qa, qb, -1.0);
    let (yp, yq) = (p.y, -q.y);
    if yp + yq <= 0.0 {
        // Both on the line of the edge.
        return 0.5 * (p.x + q.x) / ab;
    }
    (p.x * yq + q.x * yp) / (yp + yq) / ab
}

struct Hinge {
    a: u32,
    b: u32,
    ab: f64,
}

fn hinge(metric: &MetricAssignment, p1: &SimplexPoint, q1: &SimplexPoint) -> Result<Hinge> {
    let (t1, t2) = (p1.simplex(), q1.simplex());
    if t1.dim() != 2 || t2.dim() != 2 || t1 == t2 {
        return Err(Error::DegenerateInput("balance points need two distinct triangles".into()));
    }
    let e = t1
        .intersection(&t2)
        .filter(|e| e.dim() == 1)
        .ok_or_else(|| Error::DegenerateInput("the triangles do not share an edge".into()))?;
    for t in [t1, t2] {
        let l = metric.simplex_lengths(&t)?;
        realize_triangle(l[0][1], l[1][2], l[0][2])
            .map_err(|err| Error::InvalidMetric(format!("triangle is degenerate: {err}")))?;
    }
    let (a, b) = (e.vertices()[0], e.vertices()[1]);
    Ok(Hinge { a, b, ab: metric.len(a, b) })
}

/// Balance point of the shared edge of `p₁`'s and `q₁`'s triangles, by
/// unfolding the two triangles and intersecting the chord with the edge.
pub fn balance_point_closed_form(metric: &MetricAssignment, p1: &SimplexPoint, q1: &SimplexPoint) -> Result<Crossing> {
    let h = hinge(metric, p1, q1)?;
    let (va, vb) = (SimplexPoint::vertex(h.a), SimplexPoint::vertex(h.b));
    let t = balance_from_distances(
        h.ab,
        chord(metric, p1, &va)?,
        chord(metric, p1, &vb)?,
        chord(metric, q1, &va)?,
        chord(metric, q1, &vb)?,
    );
    Ok(if t > 0.0 && t < 1.0 {
        Crossing::Interior(SimplexPoint::on_edge(h.a, h.b, t))
    } else {
        Crossing::NoInteriorCrossing { nearest: if t <= 0.0 { h.a } else { h.b } }
    })
}

/// Angle at `o` in the flat triangle `(o, x, y)` given its three sides.
fn flat_angle(ox: f64, oy: f64, xy: f64) -> Option<f64> {
    (ox > 0.0 && oy > 0.0).then(|| comparison_angle(xy.min(ox + oy), ox, oy).unwrap_or(PI))
}

/// Bisection on the edge by point type: a point `t` is of the first kind
/// when `∠_t(p₁,a) + ∠_t(a,q₁)` exceeds `∠_t(q₁,b) + ∠_t(b,p₁)`, of the
/// third kind when it is smaller. The balance point separates the two kinds.
pub fn balance_point_bisection(
    metric: &MetricAssignment,
    p1: &SimplexPoint,
    q1: &SimplexPoint,
    iterations: u32,
) -> Result<Crossing> {
    let h = hinge(metric, p1, q1)?;
    let (va, vb) = (SimplexPoint::vertex(h.a), SimplexPoint::vertex(h.b));
    let (pa, pb) = (chord(metric, p1, &va)?, chord(metric, p1, &vb)?);
    let (qa, qb) = (chord(metric, q1, &va)?, chord(metric, q1, &vb)?);
    // Limits of the two sums at the edge ends decide whether a crossing exists.
    let at_a = flat_angle(h.ab, pa, pb).zip(flat_angle(h.ab, qa, qb)).map(|(x, y)| x + y);
    let at_b = flat_angle(h.ab, pb, pa).zip(flat_angle(h.ab, qb, qa)).map(|(x, y)| x + y);
    match (at_a, at_b) {
        (Some(x), Some(y)) if x < PI && y < PI => {}
        (Some(x), _) if x >= PI => return Ok(Crossing::NoInteriorCrossing { nearest: h.a }),
        (None, _) => return Ok(Crossing::NoInteriorCrossing { nearest: h.a }),
        _ => return Ok(Crossing::NoInteriorCrossing { nearest: h.b }),
    }
    let kind = |t: f64| -> Result<std::cmp::Ordering> {
        let x = SimplexPoint::on_edge(h.a, h.b, t);
        let (xp, xq) = (chord(metric, &x, p1)?, chord(metric, &x, q1)?);
        let (xa, xb) = (t * h.ab, (1.0 - t) * h.ab);
        let ang = |o_other: f64, o_pt: f64, other_pt: f64| flat_angle(o_other, o_pt, other_pt).unwrap_or(0.0);
        let first = ang(xp, xa, pa) + ang(xa, xq, qa);
        let second = ang(xq, xb, qb) + ang(xb, xp, pb);
        Ok(first.partial_cmp(&second).unwrap_or(std::cmp::Ordering::Equal))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        match kind(mid)? {
            std::cmp::Ordering::Greater => lo = mid,
            std::cmp::Ordering::Less => hi = mid,
            std::cmp::Ordering::Equal => {
                lo = mid;
                hi = mid;
                break;
            }
        }
    }
    Ok(Crossing::Interior(SimplexPoint::on_edge(h.a, h.b, 0.5 * (lo + hi))))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetourCheck {
    /// `∠_s(p,t) + ∠_s(t,q) ≥ π` within tolerance.
    pub angle_condition: bool,
    /// `d(p,s) + d(s,q) < d(p,t) + d(t,q)`.
    pub strict_inequality: bool,
    /// `d(p,t) + d(t,q) − d(p,s) − d(s,q)`.
    pub margin: f64,
}

/// Compares the detour through `t` with the one through `s`, given the
/// angle sum at `s`.
pub fn detour_inequality_check<D>(
    dist: D,
    p: &SimplexPoint,
    q: &SimplexPoint,
    s: &SimplexPoint,
    t: &SimplexPoint,
    angle_sum_at_s: f64,
    tol: f64,
) -> Result<DetourCheck>
where
    D: Fn(&SimplexPoint, &SimplexPoint) -> Result<f64>,
{
    let pts = [p, q, s, t];
    let mut scale = 0.0f64;
    let mut dmin = f64::INFINITY;
    for i in 0..4 {
        for j in i + 1..4 {
            let d = dist(pts[i], pts[j])?;
            scale = scale.max(d);
            dmin = dmin.min(d);
        }
    }
    if dmin <= 1e-15 * scale.max(1.0) {
        return Err(Error::DegenerateInput("detour check needs four distinct points".into()));
    }
    let via_s = dist(p, s)? + dist(s, q)?;
    let via_t = dist(p, t)? + dist(t, q)?;
    Ok(DetourCheck {
        angle_condition: angle_sum_at_s >= PI - tol,
        strict_inequality: via_s < via_t,
        margin: via_t - via_s,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedAngleCheck {
    /// `∠_s(p₁,t) + ∠_s(t,q₁)`.
    pub inner_sum: f64,
    /// `∠_s(p,t) + ∠_s(t,q)`.
    pub outer_sum: f64,
    /// Largest estimator spread among the angles used.
    pub uncertainty: f64,
    /// `None` when the uncertainty exceeds the decision margin.
    pub verdict: Option<bool>,
}

/// Tests whether `∠_s(p₁,t) + ∠_s(t,q₁) ≥ π` carries over to the full
/// endpoints `p`, `q`.
///
/// `toward(s, x, u)` returns the point at distance `u` from `s` on the
/// geodesic toward `x`; `dist` measures the neighbourhood distance. Angles
/// are Alexandrov-angle estimates along those geodesics.
#[allow(clippy::too_many_arguments)]
pub fn extended_angle_check<D, G>(
    dist: D,
    toward: G,
    p: &SimplexPoint,
    q: &SimplexPoint,
    p1: &SimplexPoint,
    q1: &SimplexPoint,
    s: &SimplexPoint,
    t: &SimplexPoint,
    tol: f64,
) -> Result<ExtendedAngleCheck>
where
    D: Fn(&SimplexPoint, &SimplexPoint) -> Result<f64>,
    G: Fn(&SimplexPoint, &SimplexPoint, f64) -> Result<SimplexPoint>,
{
    let reach = [p, q, p1, q1, t].iter().map(|x| dist(s, x)).collect::<Result<Vec<f64>>>()?;
    let t0 = 0.5 * reach.iter().copied().fold(f64::INFINITY, f64::min);
    if !(t0 > 0.0) {
        return Err(Error::DegenerateInput("a point coincides with s".into()));
    }
    let angle = |x: &SimplexPoint, y: &SimplexPoint| {
        alexandrov_angle_estimate(|u, v| dist(&toward(s, x, u)?, &toward(s, y, v)?), t0, 12)
    };
    let (a1, a2) = (angle(p1, t)?, angle(t, q1)?);
    let (b1, b2) = (angle(p, t)?, angle(t, q)?);
    let inner_sum = a1.value + a2.value;
    let outer_sum = b1.value + b2.value;
    let uncertainty = [a1, a2, b1, b2].iter().map(|a| a.uncertainty).fold(0.0, f64::max);
    let hypothesis = inner_sum >= PI - tol;
    let verdict = if !hypothesis {
        Some(true)
    } else if uncertainty > tol && (outer_sum - PI).abs() <= 2.0 * uncertainty {
        None
    } else {
        Some(outer_sum >= PI - tol)
    };
    Ok(ExtendedAngleCheck { inner_sum, outer_sum, uncertainty, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    fn rhombus() -> (crate::SimplicialComplex, MetricAssignment) {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["a", "b", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        (k, m)
    }

    #[test]
    fn opposite_apexes_balance_at_midpoint() {
        let (k, m) = rhombus();
        let c = SimplexPoint::new(k.simplex_from_labels(&["a", "b", "c"]).unwrap(), &[0.0, 0.0, 1.0]).unwrap();
        let d = SimplexPoint::new(k.simplex_from_labels(&["a", "b", "d"]).unwrap(), &[0.0, 0.0, 1.0]).unwrap();
        let s = balance_point_closed_form(&m, &c, &d).unwrap().point().unwrap();
        assert!((s.weight(0) - 0.5).abs() < 1e-15);
        let sb = balance_point_bisection(&m, &c, &d, 50).unwrap().point().unwrap();
        assert!((sb.weight(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chord_missing_edge() {
        // Obtuse at a on both sides: the apexes unfold behind a.
        let (k, mut m) = rhombus();
        let (a, c, d) = (0, 2, 3);
        m.set(1, c, 1.9);
        m.set(1, d, 1.9);
        let p = SimplexPoint::new(k.simplex_from_labels(&["a", "b", "c"]).unwrap(), &[0.0, 0.0, 1.0]).unwrap();
        let q = SimplexPoint::new(k.simplex_from_labels(&["a", "b", "d"]).unwrap(), &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(balance_point_closed_form(&m, &p, &q).unwrap(), Crossing::NoInteriorCrossing { nearest: a });
        assert_eq!(balance_point_bisection(&m, &p, &q, 50).unwrap(), Crossing::NoInteriorCrossing { nearest: a });
        assert!(balance_from_distances(1.0, m.len(a, c), 1.9, m.len(a, d), 1.9) < 0.0);
    }
}
