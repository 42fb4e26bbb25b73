//! Replacement geodesics after a tetrahedron and one of its triangles are
//! collapsed away.
//!
//! Write `σ = abcd` with free face `α = bcd`, and let the old geodesic enter
//! `σ` through `τ₁ = abd` and leave through `τ₂ = abc`. Once `σ` is gone the
//! path either bends once on `e₁ = ab`, or goes around `a` through
//! `e₂ = ad`, the surviving face `τ₃ = acd` and `e₃ = ac`.

use super::balance::{balance_from_distances, balance_point_closed_form, Crossing};
use super::engine::{EngineOptions, GeodesicEngine};
use super::unfold::{apex_2d, cross2};
use super::{chord, PiecewisePath, SimplexPoint};
use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::metric::{MetricAssignment, Point2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    ThroughS,
    ThroughTV,
}

impl Channel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Channel::ThroughS => "through_s",
            Channel::ThroughTV => "through_t_v",
        }
    }
}

/// Vertex and face names of the collapsed tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RerouteRoles {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    /// `τ₁ = abd`, `τ₂ = abc`, `τ₃ = acd`.
    pub tau: [SimplexId; 3],
    /// `e₁ = ab`, `e₂ = ad`, `e₃ = ac`.
    pub edges: [SimplexId; 3],
    /// Cells holding `p` and `q` after the collapse.
    pub cell_p: SimplexId,
    pub cell_q: SimplexId,
}

/// Where the old geodesic met `σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingInfo {
    pub p1: SimplexPoint,
    pub q1: SimplexPoint,
    pub original_length: f64,
    /// Balance point of `p₁, q₁` on `e₁`.
    pub s_from_crossings: Crossing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RouteFlags {
    /// Equal channel lengths; the direct channel was chosen.
    pub tie: bool,
    /// The direct channel's balance point fell off the open edge.
    pub s_at_vertex: bool,
    /// A point of the around channel sits at an end of its edge.
    pub tv_at_vertex: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RerouteResult {
    pub chosen: PiecewisePath,
    pub alternative: PiecewisePath,
    pub channel: Channel,
    /// `alternative.length − chosen.length`.
    pub margin: f64,
    pub direct: PiecewisePath,
    pub around: PiecewisePath,
    pub roles: RerouteRoles,
    pub crossing: CrossingInfo,
    pub flags: RouteFlags,
}

/// Maximal simplices containing `v`.
pub(crate) fn star_cells(k: &SimplicialComplex, v: u32) -> Vec<SimplexId> {
    k.maximal_simplices().into_iter().filter(|s| s.contains(v)).collect()
}

/// Reroutes the geodesic from `p` to `q` after collapsing `(σ, α)`.
pub fn reroute_after_collapse(
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    sigma: SimplexId,
    alpha: SimplexId,
    p: &SimplexPoint,
    q: &SimplexPoint,
) -> Result<RerouteResult> {
    let a = apex_of(k, sigma, alpha)?;
    let engine = GeodesicEngine::with_cells(k, metric, &star_cells(k, a), EngineOptions::default())?;
    reroute_with(&engine, k, metric, sigma, alpha, p, q)
}

fn apex_of(k: &SimplicialComplex, sigma: SimplexId, alpha: SimplexId) -> Result<u32> {
    if sigma.dim() != 3 || alpha.dim() != 2 || !alpha.is_face_of(&sigma) || !k.contains(&sigma) {
        return Err(Error::UnsupportedConfiguration("σ must be a tetrahedron of the complex and α one of its triangles".into()));
    }
    if k.coface_count(&alpha) != 1 {
        return Err(Error::NotFree { coface: k.name(&sigma), free_face: k.name(&alpha) });
    }
    Ok(sigma.opposite(&alpha).unwrap())
}

/// As [`reroute_after_collapse`], with the old geodesics taken from `engine`
/// (built on the star of `a` before the collapse).
pub(crate) fn reroute_with(
    engine: &GeodesicEngine,
    k: &SimplicialComplex,
    metric: &MetricAssignment,
    sigma: SimplexId,
    alpha: SimplexId,
    p: &SimplexPoint,
    q: &SimplexPoint,
) -> Result<RerouteResult> {
    let a = apex_of(k, sigma, alpha)?;
    for x in [p, q] {
        if x.in_closed(&sigma) {
            return Err(Error::UnsupportedConfiguration("p and q must lie outside the closed tetrahedron".into()));
        }
    }
    let old = engine.geodesic(p, q)?;
    let inside: Vec<usize> = (0..old.points.len() - 1)
        .filter(|&i| old.points[i].support().union(&old.points[i + 1].support()) == Some(sigma))
        .collect();
    let &[i] = inside.as_slice() else {
        return Err(if inside.is_empty() {
            Error::NoInteriorCrossing
        } else {
            Error::CrossingNotThroughTwoFaces("the geodesic meets the interior more than once".into())
        });
    };
    let (p1, q1) = (old.points[i].canonical(), old.points[i + 1].canonical());
    let (t1, t2) = (p1.support(), q1.support());
    if t1.dim() != 2 || t2.dim() != 2 || t1 == t2 {
        return Err(Error::CrossingNotThroughTwoFaces(format!(
            "entry through {} and exit through {}",
            k.name(&t1),
            k.name(&t2)
        )));
    }
    if old.points.len() != 4 {
        return Err(Error::UnsupportedConfiguration("the geodesic passes through further cells outside σ".into()));
    }
    let e1 = t1.intersection(&t2).unwrap();
    let b = e1.vertices().iter().copied().find(|&v| v != a).unwrap();
    let d = t1.opposite(&e1).unwrap();
    let c = t2.opposite(&e1).unwrap();
    let outside = |x: &SimplexPoint, tau: &SimplexId| {
        k.maximal_simplices().into_iter().find(|s| *s != sigma && tau.is_face_of(s) && x.in_closed(s))
    };
    let (Some(cell_p), Some(cell_q)) = (outside(p, &t1), outside(q, &t2)) else {
        return Err(Error::UnsupportedConfiguration("p or q is not in a cell glued on its crossing face".into()));
    };
    let roles = RerouteRoles {
        a,
        b,
        c,
        d,
        tau: [t1, t2, SimplexId::new(&[a, c, d]).unwrap()],
        edges: [e1, SimplexId::edge(a, d), SimplexId::edge(a, c)],
        cell_p,
        cell_q,
    };
    let crossing = CrossingInfo { p1, q1, original_length: old.length, s_from_crossings: balance_point_closed_form(metric, &p1, &q1)? };
    let (direct, s_at_vertex) = direct_channel(metric, &roles, p, q)?;
    let (around, tv_at_vertex) = around_channel(metric, &roles, p, q)?;
    let margin = around.length - direct.length;
    let scale = old.length.max(f64::MIN_POSITIVE);
    let tie = margin.abs() <= 1e-12 * scale;
    let flags = RouteFlags { tie, s_at_vertex, tv_at_vertex };
    let (chosen, alternative, channel) = if margin >= 0.0 || tie {
        (direct.clone(), around.clone(), Channel::ThroughS)
    } else {
        (around.clone(), direct.clone(), Channel::ThroughTV)
    };
    Ok(RerouteResult { margin: alternative.length - chosen.length, chosen, alternative, channel, direct, around, roles, crossing, flags })
}

fn direct_channel(metric: &MetricAssignment, r: &RerouteRoles, p: &SimplexPoint, q: &SimplexPoint) -> Result<(PiecewisePath, bool)> {
    let (va, vb) = (SimplexPoint::vertex(r.a), SimplexPoint::vertex(r.b));
    let t = balance_from_distances(
        metric.len(r.a, r.b),
        chord(metric, p, &va)?,
        chord(metric, p, &vb)?,
        chord(metric, q, &va)?,
        chord(metric, q, &vb)?,
    );
    let at_vertex = !(t > 0.0 && t < 1.0);
    let s = SimplexPoint::on_edge(r.a, r.b, t.clamp(0.0, 1.0));
    Ok((PiecewisePath::new(vec![*p, s, *q], metric)?, at_vertex))
}

/// The planar fan `(a, d, p̄) | τ₃ | (a, c, q̄)` with `a` at the origin.
struct Fan {
    d: Point2,
    c: Point2,
    p: Point2,
    q: Point2,
}

fn fan(metric: &MetricAssignment, r: &RerouteRoles, p: &SimplexPoint, q: &SimplexPoint) -> Result<Fan> {
    let (va, vc, vd) = (SimplexPoint::vertex(r.a), SimplexPoint::vertex(r.c), SimplexPoint::vertex(r.d));
    let o = Point2::zeros();
    let d = Point2::new(metric.len(r.a, r.d), 0.0);
    let pp = apex_2d(&o, &d, chord(metric, p, &va)?, chord(metric, p, &vd)?, -1.0);
    let c = apex_2d(&o, &d, metric.len(r.a, r.c), metric.len(r.c, r.d), 1.0);
    let side = -cross2(&c, &d).signum();
    let qq = apex_2d(&o, &c, chord(metric, q, &va)?, chord(metric, q, &vc)?, side);
    Ok(Fan { d, c, p: pp, q: qq })
}

/// Parameter along `o → e` where segment `x → y` meets the line of `o e`,
/// clamped to the edge.
fn gate_crossing(x: &Point2, y: &Point2, e: &Point2) -> f64 {
    let dir = y - x;
    let den = cross2(e, &dir);
    if den.abs() <= f64::MIN_POSITIVE {
        return 0.0;
    }
    // o + λe = x + μ·dir.
    (cross2(x, &dir) / den).clamp(0.0, 1.0)
}

fn around_channel(metric: &MetricAssignment, r: &RerouteRoles, p: &SimplexPoint, q: &SimplexPoint) -> Result<(PiecewisePath, bool)> {
    let f = fan(metric, r, p, q)?;
    let len = |t: f64, v: f64| (f.p - f.d * t).norm() + (f.d * t - f.c * v).norm() + (f.c * v - f.q).norm();
    // Straight line through both gates, else one end pinned at a vertex.
    let t_line = gate_crossing(&f.p, &f.q, &f.d);
    let v_line = gate_crossing(&f.p, &f.q, &f.c);
    let mut candidates = vec![(0.0, 0.0), (t_line, v_line)];
    candidates.push((1.0, gate_crossing(&f.d, &f.q, &f.c)));
    candidates.push((gate_crossing(&f.p, &f.c, &f.d), 1.0));
    let (t, v, _) = candidates
        .into_iter()
        .fold((0.0, 0.0, f64::INFINITY), |best, (t, v)| {
            let l = len(t, v);
            if l < best.2 {
                (t, v, l)
            } else {
                best
            }
        });
    let at_vertex = [t, v].iter().any(|x| *x <= 0.0 || *x >= 1.0);
    let pt = SimplexPoint::on_edge(r.a, r.d, t);
    let pv = SimplexPoint::on_edge(r.a, r.c, v);
    let mut pts = vec![*p, pt, pv, *q];
    pts.dedup_by(|x, y| x.canonical() == y.canonical());
    Ok((PiecewisePath::new(pts, metric)?, at_vertex))
}

/// The around channel by alternating balance points: `v` from `(t, q)` on
/// `e₃`, then `t` from `(p, v)` on `e₂`, until the length stops decreasing
/// by more than `1e-11`. Returns `(t, v, length)`.
pub fn tv_refinement(metric: &MetricAssignment, roles: &RerouteRoles, p: &SimplexPoint, q: &SimplexPoint) -> Result<(f64, f64, f64)> {
    let r = roles;
    let (va, vc, vd) = (SimplexPoint::vertex(r.a), SimplexPoint::vertex(r.c), SimplexPoint::vertex(r.d));
    let (ad, ac) = (metric.len(r.a, r.d), metric.len(r.a, r.c));
    let (pa, pd) = (chord(metric, p, &va)?, chord(metric, p, &vd)?);
    let (qa, qc) = (chord(metric, q, &va)?, chord(metric, q, &vc)?);
    let length = |t: f64, v: f64| -> Result<f64> {
        let (pt, pv) = (SimplexPoint::on_edge(r.a, r.d, t), SimplexPoint::on_edge(r.a, r.c, v));
        Ok(chord(metric, p, &pt)? + chord(metric, &pt, &pv)? + chord(metric, &pv, q)?)
    };
    let (mut t, mut v) = (0.5, 0.5);
    let mut prev = length(t, v)?;
    for _ in 0..100_000 {
        // t on e₂ seen from inside τ₃: distances to a and c.
        let tp = SimplexPoint::on_edge(r.a, r.d, t);
        let (ta, tc) = (t * ad, chord(metric, &tp, &vc)?);
        v = balance_from_distances(ac, ta, tc, qa, qc).clamp(0.0, 1.0);
        let vp = SimplexPoint::on_edge(r.a, r.c, v);
        let (wa, wd) = (v * ac, chord(metric, &vp, &vd)?);
        t = balance_from_distances(ad, pa, pd, wa, wd).clamp(0.0, 1.0);
        let l = length(t, v)?;
        if prev - l <= 1e-11 {
            prev = l.min(prev);
            break;
        }
        prev = l;
    }
    Ok((t, v, prev))
}
