use nalgebra::{Matrix3, Vector2, Vector3};

use super::TOLERANCES;
use crate::error::{Error, Result};

pub type Point2 = Vector2<f64>;
pub type Point3 = Vector3<f64>;

/// Heron product `16·area²` of a triangle with the given sides.
pub(crate) fn heron16(a: f64, b: f64, c: f64) -> f64 {
    // Kahan's ordering keeps the product accurate for needle triangles.
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [a, b, c] = s;
    (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
}

/// Planar vertices: the first at the origin, the second on the positive x
/// axis, the third in the upper half-plane.
pub fn realize_triangle(l12: f64, l23: f64, l31: f64) -> Result<[Point2; 3]> {
    if !(l12 > 0.0 && l23 > 0.0 && l31 > 0.0) {
        return Err(Error::DegenerateSimplex(format!("non-positive side in ({l12}, {l23}, {l31})")));
    }
    let h = heron16(l12, l23, l31);
    let scale = (l12 + l23 + l31).powi(4);
    if !(h > TOLERANCES.planar * scale) {
        return Err(Error::DegenerateSimplex(format!("sides ({l12}, {l23}, {l31}) span no area")));
    }
    let x = (l12 * l12 + l31 * l31 - l23 * l23) / (2.0 * l12);
    let y = h.sqrt() / (2.0 * l12);
    Ok([Point2::zeros(), Point2::new(l12, 0.0), Point2::new(x, y)])
}

/// `288·V²` for lengths ordered `01,02,03,12,13,23`.
pub fn cayley_menger(l: &[f64; 6]) -> f64 {
    8.0 * gram(l).determinant()
}

fn gram(l: &[f64; 6]) -> Matrix3<f64> {
    let [d01, d02, d03, d12, d13, d23] = l.map(|x| x * x);
    let g12 = 0.5 * (d01 + d02 - d12);
    let g13 = 0.5 * (d01 + d03 - d13);
    let g23 = 0.5 * (d02 + d03 - d23);
    Matrix3::new(d01, g12, g13, g12, d02, g23, g13, g23, d03)
}

pub fn tetrahedron_volume(l: &[f64; 6]) -> f64 {
    (cayley_menger(l).max(0.0) / 288.0).sqrt()
}

/// Spatial vertices with the first three placed as in [`realize_triangle`]
/// and the fourth at positive z.
pub fn realize_tetrahedron(l: &[f64; 6]) -> Result<[Point3; 4]> {
    let cm = cayley_menger(l);
    let scale = l.iter().fold(0.0f64, |m, x| m.max(*x));
    // Rejects volumes below 1e-7·scale³.
    if !(cm > 288.0 * 1e-14 * scale.powi(6)) || l.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::Unrealizable { simplex: "tetrahedron".into(), determinant: cm });
    }
    let [d01, d02, d03, d12, d13, d23] = *l;
    let base = realize_triangle(d01, d12, d02)
        .map_err(|_| Error::Unrealizable { simplex: "tetrahedron".into(), determinant: cm })?;
    let p2 = base[2];
    let x = (d03 * d03 - d13 * d13 + d01 * d01) / (2.0 * d01);
    let y = (d03 * d03 - d23 * d23 + p2.norm_squared() - 2.0 * x * p2.x) / (2.0 * p2.y);
    // z = 6V / (2·area(012)) = sqrt(det G) / (d01 · y2).
    let z = (cm / 8.0).sqrt() / (d01 * p2.y);
    Ok([Point3::zeros(), Point3::new(d01, 0.0, 0.0), Point3::new(p2.x, p2.y, 0.0), Point3::new(x, y, z)])
}

/// Interior dihedral angle of a realized tetrahedron along edge `(i, j)`.
pub fn dihedral_angle(p: &[Point3; 4], i: usize, j: usize) -> f64 {
    let others: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
    let e = (p[j] - p[i]).normalize();
    let perp = |k: usize| {
        let w = p[k] - p[i];
        w - e * e.dot(&w)
    };
    let (u, w) = (perp(others[0]), perp(others[1]));
    u.cross(&w).norm().atan2(u.dot(&w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_coordinates() {
        let p = realize_triangle(1.0, 1.0, 1.0).unwrap();
        assert!((p[2] - Point2::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn right_triangle_round_trip() {
        let p = realize_triangle(3.0, 4.0, 5.0).unwrap();
        assert!(((p[0] - p[1]).norm() - 3.0).abs() < 1e-12);
        assert!(((p[1] - p[2]).norm() - 4.0).abs() < 1e-12);
        assert!(((p[2] - p[0]).norm() - 5.0).abs() < 1e-12);
        assert!((p[0] - p[1]).dot(&(p[2] - p[1])).abs() < 1e-12);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(realize_triangle(1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn regular_tetrahedron_volume() {
        let l = [1.0; 6];
        assert!((tetrahedron_volume(&l) - 2f64.sqrt() / 12.0).abs() < 1e-15);
        let p = realize_tetrahedron(&l).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(((p[i] - p[j]).norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!((dihedral_angle(&p, 0, 1) - (1.0f64 / 3.0).acos()).abs() < 1e-12);
    }

    #[test]
    fn flat_six_tuple_rejected() {
        // Square with both diagonals.
        let s = 2f64.sqrt();
        let l = [1.0, s, 1.0, 1.0, s, 1.0];
        match realize_tetrahedron(&l) {
            Err(Error::Unrealizable { determinant, .. }) => assert!(determinant.abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
