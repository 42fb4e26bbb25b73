use std::f64::consts::PI;

use super::{Point2, TOLERANCES};
use crate::error::{Error, Result};

/// Planar angle opposite `opposite` in a triangle with the given sides.
///
/// Degenerate (collinear) triples are accepted; the cosine is clamped.
pub fn comparison_angle(opposite: f64, adjacent1: f64, adjacent2: f64) -> Result<f64> {
    if !(adjacent1 > 0.0 && adjacent2 > 0.0) || opposite < 0.0 || !opposite.is_finite() {
        return Err(Error::InvalidMetric(format!(
            "comparison angle needs positive adjacent sides, got ({opposite}, {adjacent1}, {adjacent2})"
        )));
    }
    let slack = TOLERANCES.planar * (opposite + adjacent1 + adjacent2);
    if opposite > adjacent1 + adjacent2 + slack
        || adjacent1 > opposite + adjacent2 + slack
        || adjacent2 > opposite + adjacent1 + slack
    {
        return Err(Error::InvalidMetric(format!(
            "sides ({opposite}, {adjacent1}, {adjacent2}) violate the triangle inequality"
        )));
    }
    Ok(angle_unchecked(opposite, adjacent1, adjacent2))
}

pub(crate) fn angle_unchecked(opposite: f64, a1: f64, a2: f64) -> f64 {
    // (a1 - a2)^2 form avoids cancellation for thin angles.
    let num = (opposite - (a1 - a2)) * (opposite + (a1 - a2));
    let c = 1.0 - num / (2.0 * a1 * a2);
    c.clamp(-1.0, 1.0).acos()
}

/// `α + β + γ − π`.
pub fn triangle_curvature(alpha: f64, beta: f64, gamma: f64) -> f64 {
    alpha + beta + gamma - PI
}

/// Side lengths `l12, l23, l31` with the angles they force at vertices 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonTriangle {
    pub sides: [f64; 3],
    pub angles: [f64; 3],
}

impl ComparisonTriangle {
    pub fn new(l12: f64, l23: f64, l31: f64) -> Result<Self> {
        let sides = [l12, l23, l31];
        if sides.iter().any(|s| *s < 0.0 || !s.is_finite()) {
            return Err(Error::InvalidMetric(format!("bad sides {sides:?}")));
        }
        let slack = TOLERANCES.planar * (l12 + l23 + l31);
        if l12 > l23 + l31 + slack || l23 > l12 + l31 + slack || l31 > l12 + l23 + slack {
            return Err(Error::InvalidMetric(format!("sides {sides:?} violate the triangle inequality")));
        }
        let at = |op: f64, a: f64, b: f64| if a > 0.0 && b > 0.0 { angle_unchecked(op, a, b) } else { f64::NAN };
        let mut angles = [at(l23, l12, l31), at(l31, l12, l23), at(l12, l23, l31)];
        // A zero side leaves its two end angles undefined; split the rest evenly.
        let known: f64 = angles.iter().filter(|a| a.is_finite()).sum();
        let unknown = angles.iter().filter(|a| !a.is_finite()).count();
        for a in angles.iter_mut().filter(|a| !a.is_finite()) {
            *a = ((PI - known) / unknown as f64).max(0.0);
        }
        Ok(ComparisonTriangle { sides, angles })
    }

    pub fn curvature(&self) -> f64 {
        triangle_curvature(self.angles[0], self.angles[1], self.angles[2])
    }

    /// Planar vertices, degenerate triangles included.
    pub fn vertices(&self) -> [Point2; 3] {
        comparison_points(self.sides[0], self.sides[1], self.sides[2])
    }
}

/// Planar comparison vertices for sides `l12, l23, l31`, allowing
/// degenerate triangles (sides are assumed to satisfy the triangle
/// inequalities up to rounding).
pub fn comparison_points(l12: f64, l23: f64, l31: f64) -> [Point2; 3] {
    let p1 = Point2::zeros();
    if l12 <= 0.0 {
        return [p1, p1, Point2::new(l31, 0.0)];
    }
    let p2 = Point2::new(l12, 0.0);
    let x = (l12 * l12 + l31 * l31 - l23 * l23) / (2.0 * l12);
    let h = super::realize::heron16(l12, l23, l31).max(0.0);
    let y = h.sqrt() / (2.0 * l12);
    [p1, p2, Point2::new(x, y)]
}

/// Point at arclength fraction `t` from `a` to `b`.
pub(crate) fn lerp2(a: &Point2, b: &Point2, t: f64) -> Point2 {
    a + (b - a) * t
}
