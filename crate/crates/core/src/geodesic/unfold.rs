use super::SimplexPoint;
use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::metric::{realize_triangle, MetricAssignment, Point2};

/// A chain of triangles laid out in the plane, each consecutive pair
/// reflected across its shared edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Unfolding {
    pub fan: Vec<SimplexId>,
    /// Planar position of each vertex of each triangle, in `fan[i].vertices()` order.
    pub coords: Vec<[Point2; 3]>,
}

impl Unfolding {
    pub fn position(&self, i: usize, v: u32) -> Option<Point2> {
        self.fan[i].position(v).map(|k| self.coords[i][k])
    }

    /// Planar image of a point of triangle `i`.
    pub fn image(&self, i: usize, p: &SimplexPoint) -> Option<Point2> {
        let c = p.coords_in(&self.fan[i])?;
        Some(self.coords[i][0] * c[0] + self.coords[i][1] * c[1] + self.coords[i][2] * c[2])
    }
}

pub(crate) fn cross2(u: &Point2, w: &Point2) -> f64 {
    u.x * w.y - u.y * w.x
}

/// Point at distances `ra`, `rb` from `a`, `b`, on the side of line `ab`
/// given by the sign of `side` (positive is to the left of `a → b`).
pub(crate) fn apex_2d(a: &Point2, b: &Point2, ra: f64, rb: f64, side: f64) -> Point2 {
    let e = b - a;
    let l = e.norm();
    let x = (ra * ra - rb * rb + l * l) / (2.0 * l);
    let h = (ra * ra - x * x).max(0.0).sqrt();
    let u = e / l;
    let n = Point2::new(-u.y, u.x);
    a + u * x + n * (h * side.signum())
}

pub fn unfold_fan(k: &SimplicialComplex, metric: &MetricAssignment, fan: &[SimplexId]) -> Result<Unfolding> {
    if fan.is_empty() {
        return Err(Error::Fan("empty fan".into()));
    }
    let mut coords: Vec<[Point2; 3]> = Vec::with_capacity(fan.len());
    for (i, t) in fan.iter().enumerate() {
        if t.dim() != 2 || !k.contains(t) {
            return Err(Error::Fan(format!("{} is not a triangle of the complex", k.name(t))));
        }
        let l = metric.simplex_lengths(t)?;
        if i == 0 {
            let p = realize_triangle(l[0][1], l[1][2], l[0][2])?;
            coords.push(p);
            continue;
        }
        let prev = fan[i - 1];
        let shared = prev.intersection(t).filter(|s| s.dim() == 1).ok_or_else(|| {
            Error::Fan(format!("{} and {} do not share exactly one edge", k.name(&prev), k.name(t)))
        })?;
        realize_triangle(l[0][1], l[1][2], l[0][2])?;
        let (va, vb) = (shared.vertices()[0], shared.vertices()[1]);
        let pa = coords[i - 1][prev.position(va).unwrap()];
        let pb = coords[i - 1][prev.position(vb).unwrap()];
        let old = coords[i - 1][prev.position(prev.opposite(&shared).unwrap()).unwrap()];
        let w = t.opposite(&shared).unwrap();
        let side = -cross2(&(pb - pa), &(old - pa));
        let pw = apex_2d(&pa, &pb, metric.len(va, w), metric.len(vb, w), side);
        let mut c = [Point2::zeros(); 3];
        for (j, &v) in t.vertices().iter().enumerate() {
            c[j] = if v == va {
                pa
            } else if v == vb {
                pb
            } else {
                pw
            };
        }
        coords.push(c);
    }
    Ok(Unfolding { fan: fan.to_vec(), coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn rhombus() {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["b", "c", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let fan = [k.simplex_from_labels(&["a", "b", "c"]).unwrap(), k.simplex_from_labels(&["b", "c", "d"]).unwrap()];
        let u = unfold_fan(&k, &m, &fan).unwrap();
        let a = u.position(0, 0).unwrap();
        let d = u.position(1, 3).unwrap();
        assert!(((a - d).norm() - 3f64.sqrt()).abs() < 1e-12);
        assert!(((u.position(0, 1).unwrap() - u.position(1, 1).unwrap()).norm()) < 1e-15);
    }

    #[test]
    fn non_adjacent_rejected() {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["c", "d", "e"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let fan = [k.simplex_from_labels(&["a", "b", "c"]).unwrap(), k.simplex_from_labels(&["c", "d", "e"]).unwrap()];
        assert!(matches!(unfold_fan(&k, &m, &fan), Err(Error::Fan(_))));
    }
}
