//! Points, paths and geodesics in metric complexes.

mod balance;
mod engine;
pub(crate) mod midpoint;
mod oracle;
pub(crate) mod reroute;
mod unfold;

pub use balance::{
    balance_from_distances, balance_point_bisection, balance_point_closed_form, detour_inequality_check,
    extended_angle_check, Crossing, DetourCheck, ExtendedAngleCheck,
};
pub use engine::{EngineOptions, GeodesicEngine};
pub use midpoint::{safe_midpoint, MidpointOutcome};
pub use oracle::{subdivision_oracle, OracleResult};
pub use reroute::{
    reroute_after_collapse, tv_refinement, Channel, CrossingInfo, RerouteResult, RerouteRoles, RouteFlags,
};
pub use unfold::{unfold_fan, Unfolding};

use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::metric::{barycentric_distance, MetricAssignment, TOLERANCES};

/// Coordinates at or below this are treated as zero when computing supports.
const SNAP: f64 = 1e-14;

/// A point given by barycentric coordinates in a simplex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexPoint {
    simplex: SimplexId,
    coords: [f64; 4],
}

impl SimplexPoint {
    /// Coordinates must be nonnegative and sum to 1 within 1e-12; tiny
    /// negative rounding is clamped and the rest renormalised.
    pub fn new(simplex: SimplexId, coords: &[f64]) -> Result<Self> {
        if coords.len() != simplex.len() {
            return Err(Error::MalformedInput(format!(
                "{} coordinates for a simplex with {} vertices",
                coords.len(),
                simplex.len()
            )));
        }
        let sum: f64 = coords.iter().sum();
        if coords.iter().any(|c| !c.is_finite() || *c < -TOLERANCES.planar)
            || (sum - 1.0).abs() > TOLERANCES.planar
        {
            return Err(Error::MalformedInput(format!("barycentric coordinates {coords:?} are not a convex combination")));
        }
        Ok(Self::normalized(simplex, coords))
    }

    /// Clamps and renormalises without validation.
    pub(crate) fn normalized(simplex: SimplexId, coords: &[f64]) -> Self {
        let mut c = [0.0; 4];
        let mut sum = 0.0;
        for (i, &x) in coords.iter().enumerate() {
            c[i] = if x > SNAP { x } else { 0.0 };
            sum += c[i];
        }
        if sum <= 0.0 {
            // All mass snapped away: keep the largest coordinate.
            let i = (0..coords.len()).max_by(|&i, &j| coords[i].partial_cmp(&coords[j]).unwrap()).unwrap();
            c[i] = 1.0;
            sum = 1.0;
        }
        for x in c.iter_mut().take(coords.len()) {
            *x /= sum;
        }
        SimplexPoint { simplex, coords: c }
    }

    pub fn vertex(v: u32) -> Self {
        SimplexPoint { simplex: SimplexId::vertex(v), coords: [1.0, 0.0, 0.0, 0.0] }
    }

    /// `(1 − t)·a + t·b`.
    pub fn on_edge(a: u32, b: u32, t: f64) -> Self {
        let e = SimplexId::edge(a, b);
        let c = if e.vertices()[0] == a { [1.0 - t, t] } else { [t, 1.0 - t] };
        Self::normalized(e, &c).canonical()
    }

    pub fn simplex(&self) -> SimplexId {
        self.simplex
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.simplex.len()]
    }

    /// Smallest face containing the point.
    pub fn support(&self) -> SimplexId {
        let mut buf = [0u32; 4];
        let mut k = 0;
        for (i, &v) in self.simplex.vertices().iter().enumerate() {
            if self.coords[i] > 0.0 {
                buf[k] = v;
                k += 1;
            }
        }
        SimplexId::from_sorted(&buf[..k])
    }

    /// The same point expressed in its support.
    pub fn canonical(&self) -> Self {
        let s = self.support();
        if s == self.simplex {
            return *self;
        }
        let mut c = [0.0; 4];
        for (i, &v) in s.vertices().iter().enumerate() {
            c[i] = self.coords[self.simplex.position(v).unwrap()];
        }
        SimplexPoint { simplex: s, coords: c }
    }

    /// Coordinates with respect to `cell`'s vertex order, if the point lies in it.
    pub fn coords_in(&self, cell: &SimplexId) -> Option<[f64; 4]> {
        let mut out = [0.0; 4];
        for (i, &v) in self.simplex.vertices().iter().enumerate() {
            if self.coords[i] > 0.0 {
                out[cell.position(v)?] = self.coords[i];
            }
        }
        Some(out)
    }

    pub fn in_closed(&self, s: &SimplexId) -> bool {
        self.support().is_face_of(s)
    }

    /// Weight of vertex `v`.
    pub fn weight(&self, v: u32) -> f64 {
        self.simplex.position(v).map_or(0.0, |i| self.coords[i])
    }

    /// `(1 − t)·x + t·y` inside `cell`, which must contain both.
    pub fn lerp_in(cell: &SimplexId, x: &SimplexPoint, y: &SimplexPoint, t: f64) -> Option<SimplexPoint> {
        let (a, b) = (x.coords_in(cell)?, y.coords_in(cell)?);
        let mut c = [0.0; 4];
        for i in 0..cell.len() {
            c[i] = (1.0 - t) * a[i] + t * b[i];
        }
        Some(Self::normalized(*cell, &c[..cell.len()]).canonical())
    }

    /// Comma-joined labels and coordinates, e.g. `a,b@0.25,0.75`.
    pub fn describe(&self, k: &SimplicialComplex) -> String {
        let c: Vec<String> = self.coords().iter().map(|x| format!("{x}")).collect();
        format!("{}@{}", k.name(&self.simplex), c.join(","))
    }

    /// Parses `labels@coords` as written by [`SimplexPoint::describe`]; a bare
    /// label is a vertex.
    pub fn parse(k: &SimplicialComplex, text: &str) -> Result<Self> {
        let (labels, coords) = match text.split_once('@') {
            Some((l, c)) => (l, Some(c)),
            None => (text, None),
        };
        let names: Vec<&str> = labels.split(',').map(str::trim).collect();
        let s = k.simplex_from_labels(&names)?;
        let given: Vec<f64> = match coords {
            None if names.len() == 1 => vec![1.0],
            None => return Err(Error::MalformedInput(format!("point {text:?} needs coordinates"))),
            Some(c) => c
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|e| Error::MalformedInput(format!("{x:?}: {e}"))))
                .collect::<Result<_>>()?,
        };
        // Reorder to the sorted vertex order of `s`.
        let ids: Vec<u32> = names.iter().map(|n| k.vertex_index(n).unwrap()).collect();
        if given.len() != ids.len() {
            return Err(Error::MalformedInput(format!("point {text:?}: label and coordinate counts differ")));
        }
        let mut c = vec![0.0; s.len()];
        for (id, x) in ids.iter().zip(&given) {
            c[s.position(*id).unwrap()] = *x;
        }
        SimplexPoint::new(s, &c)
    }
}

/// Euclidean distance between two points of one closed simplex.
pub fn chord(metric: &MetricAssignment, x: &SimplexPoint, y: &SimplexPoint) -> Result<f64> {
    let s = x
        .support()
        .union(&y.support())
        .ok_or_else(|| Error::DegenerateInput("points share no simplex".into()))?;
    let l = metric.simplex_lengths(&s)?;
    let (a, b) = (x.coords_in(&s).unwrap(), y.coords_in(&s).unwrap());
    Ok(barycentric_distance(&l, &a[..s.len()], &b[..s.len()]))
}

/// A polygonal path whose consecutive points share a closed simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    pub points: Vec<SimplexPoint>,
    pub length: f64,
}

impl PiecewisePath {
    pub fn new(points: Vec<SimplexPoint>, metric: &MetricAssignment) -> Result<Self> {
        let mut p = PiecewisePath { points, length: 0.0 };
        p.length = path_length(&p, metric)?;
        Ok(p)
    }

    pub fn point(p: SimplexPoint) -> Self {
        PiecewisePath { points: vec![p], length: 0.0 }
    }

    pub fn start(&self) -> &SimplexPoint {
        &self.points[0]
    }

    pub fn end(&self) -> &SimplexPoint {
        self.points.last().unwrap()
    }

    /// `self` followed by `other`, which must start where `self` ends.
    pub fn concat(&self, other: &PiecewisePath) -> PiecewisePath {
        let mut points = self.points.clone();
        points.extend(other.points.iter().skip(1).copied());
        PiecewisePath { points, length: self.length + other.length }
    }

    pub fn reversed(&self) -> PiecewisePath {
        let mut points = self.points.clone();
        points.reverse();
        PiecewisePath { points, length: self.length }
    }

    /// Every consecutive pair spans a simplex of `k`.
    pub fn is_valid_in(&self, k: &SimplicialComplex) -> bool {
        !self.points.is_empty()
            && self.points.iter().all(|p| k.contains(&p.support()))
            && self.points.windows(2).all(|w| w[0].support().union(&w[1].support()).is_some_and(|s| k.contains(&s)))
    }

    /// The point at arclength fraction `t ∈ [0, 1]`.
    pub fn point_at(&self, t: f64, metric: &MetricAssignment) -> Result<SimplexPoint> {
        let target = t.clamp(0.0, 1.0) * self.length;
        let mut acc = 0.0;
        for w in self.points.windows(2) {
            let l = chord(metric, &w[0], &w[1])?;
            if acc + l >= target && l > 0.0 {
                let cell = w[0].support().union(&w[1].support()).unwrap();
                let u = ((target - acc) / l).clamp(0.0, 1.0);
                return Ok(SimplexPoint::lerp_in(&cell, &w[0], &w[1], u).unwrap());
            }
            acc += l;
        }
        Ok(*self.end())
    }
}

/// Sum of the within-simplex chords.
pub fn path_length(path: &PiecewisePath, metric: &MetricAssignment) -> Result<f64> {
    let mut total = 0.0;
    for w in path.points.windows(2) {
        total += chord(metric, &w[0], &w[1])?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn point_and_edge_lengths() {
        let k = build_complex(&[vec!["a", "b", "c"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let a = SimplexPoint::vertex(0);
        assert_eq!(path_length(&PiecewisePath::point(a), &m).unwrap(), 0.0);
        let p = PiecewisePath::new(vec![a, SimplexPoint::vertex(1)], &m).unwrap();
        assert!((p.length - 1.0).abs() < 1e-15);
    }

    #[test]
    fn subdivision_is_additive() {
        let k = build_complex(&[vec!["a", "b", "c"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let s = k.simplex_from_labels(&["a", "b", "c"]).unwrap();
        let x = SimplexPoint::new(s, &[0.7, 0.2, 0.1]).unwrap();
        let y = SimplexPoint::new(s, &[0.1, 0.3, 0.6]).unwrap();
        let whole = PiecewisePath::new(vec![x, y], &m).unwrap();
        let mid = SimplexPoint::lerp_in(&s, &x, &y, 0.3).unwrap();
        let split = PiecewisePath::new(vec![x, mid, y], &m).unwrap();
        assert!((whole.length - split.length).abs() < 1e-12);
        let q = whole.point_at(0.3, &m).unwrap();
        assert!(chord(&m, &q, &mid).unwrap() < 1e-12);
    }

    #[test]
    fn parse_and_describe() {
        let k = build_complex(&[vec!["a", "b", "c"]]).unwrap();
        let p = SimplexPoint::parse(&k, "c,a@0.25,0.75").unwrap();
        assert_eq!(p.weight(0), 0.75);
        assert_eq!(SimplexPoint::parse(&k, &p.describe(&k)).unwrap(), p);
        assert_eq!(SimplexPoint::parse(&k, "b").unwrap(), SimplexPoint::vertex(1));
        assert!(SimplexPoint::parse(&k, "a,b@0.5,0.6").is_err());
    }
}
