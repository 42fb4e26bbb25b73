use std::cmp::Ordering;
use std::f64::consts::PI;

use super::{Point2, TOLERANCES};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleCase {
    LessPi,
    EqualPi,
    GreaterPi,
}

impl AngleCase {
    /// Direction every rebuilt quantity takes relative to the original.
    pub fn expected(&self) -> Ordering {
        match self {
            AngleCase::LessPi => Ordering::Less,
            AngleCase::EqualPi => Ordering::Equal,
            AngleCase::GreaterPi => Ordering::Greater,
        }
    }
}

/// Rebuilt and original values of `|bd|`, the angle at `a` and the angle at `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaComparisons {
    pub bd_rebuilt: f64,
    pub bd_original: f64,
    pub angle_a_rebuilt: f64,
    pub angle_a_original: f64,
    pub angle_c_rebuilt: f64,
    pub angle_c_original: f64,
}

impl LemmaComparisons {
    /// Rebuilt versus original for the three quantities, `Equal` within `tol`.
    pub fn directions(&self, tol: f64) -> [Ordering; 3] {
        let cmp = |x: f64, y: f64| {
            if (x - y).abs() <= tol * (1.0 + y.abs()) {
                Ordering::Equal
            } else {
                x.partial_cmp(&y).unwrap()
            }
        };
        [
            cmp(self.bd_rebuilt, self.bd_original),
            cmp(self.angle_a_rebuilt, self.angle_a_original),
            cmp(self.angle_c_rebuilt, self.angle_c_original),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AleksandrovRecord {
    pub case: AngleCase,
    /// `∠_d(a,b) + ∠_d(b,c)`.
    pub angle_sum: f64,
    /// `a′, b′, c′, d′`.
    pub rebuilt: [Point2; 4],
    pub comparisons: LemmaComparisons,
}

fn angle_at(o: &Point2, p: &Point2, q: &Point2) -> f64 {
    let (u, v) = (p - o, q - o);
    (u.x * v.y - u.y * v.x).abs().atan2(u.dot(&v))
}

fn orient(p: &Point2, q: &Point2, r: &Point2) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// Rebuilds the straightened triangle `a′b′c′` for a planar quadruple with
/// `a`, `c` on opposite sides of line `bd`, and compares it with the original.
pub fn aleksandrov_lemma(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<AleksandrovRecord> {
    let lbd = (b - d).norm();
    let scale = [a, b, c].iter().map(|p| (p - d).norm()).fold(lbd, f64::max);
    if lbd <= TOLERANCES.planar * scale {
        return Err(Error::DegenerateInput("b and d coincide".into()));
    }
    let (oa, oc) = (orient(&b, &d, &a), orient(&b, &d, &c));
    let eps = TOLERANCES.planar * scale * scale;
    if oa.abs() <= eps || oc.abs() <= eps {
        return Err(Error::DegenerateInput("a or c lies on the line bd".into()));
    }
    if oa.signum() == oc.signum() {
        return Err(Error::DegenerateInput("a and c are on the same side of bd".into()));
    }
    let (lab, lbc, lad, ldc) = ((a - b).norm(), (b - c).norm(), (a - d).norm(), (d - c).norm());
    let lac = lad + ldc;
    if lab + lbc < lac * (1.0 - TOLERANCES.planar) {
        return Err(Error::DegenerateInput(format!(
            "rebuilt triangle does not exist: |ab| + |bc| = {} < |ad| + |dc| = {lac}",
            lab + lbc
        )));
    }
    let angle_sum = angle_at(&d, &a, &b) + angle_at(&d, &b, &c);
    let case = if (angle_sum - PI).abs() <= TOLERANCES.planar {
        AngleCase::EqualPi
    } else if angle_sum < PI {
        AngleCase::LessPi
    } else {
        AngleCase::GreaterPi
    };
    let ap = Point2::zeros();
    let cp = Point2::new(lac, 0.0);
    let x = (lab * lab + lac * lac - lbc * lbc) / (2.0 * lac);
    let bp = Point2::new(x, (lab * lab - x * x).max(0.0).sqrt());
    let dp = Point2::new(lad, 0.0);
    let comparisons = LemmaComparisons {
        bd_rebuilt: (bp - dp).norm(),
        bd_original: lbd,
        angle_a_rebuilt: angle_at(&ap, &bp, &dp),
        angle_a_original: angle_at(&a, &b, &d),
        angle_c_rebuilt: angle_at(&cp, &bp, &dp),
        angle_c_original: angle_at(&c, &b, &d),
    };
    Ok(AleksandrovRecord { case, angle_sum, rebuilt: [ap, bp, cp, dp], comparisons })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_case_is_equality() {
        let r = aleksandrov_lemma(
            Point2::new(-1.0, 0.0),
            Point2::new(0.3, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 0.0),
        )
        .unwrap();
        assert_eq!(r.case, AngleCase::EqualPi);
        assert_eq!(r.comparisons.directions(1e-10), [Ordering::Equal; 3]);
    }

    #[test]
    fn bends_toward_and_away_from_b() {
        let b = Point2::new(0.2, 1.0);
        let toward = aleksandrov_lemma(Point2::new(-1.0, 0.0), b, Point2::new(1.0, 0.0), Point2::new(0.0, 0.2)).unwrap();
        assert_eq!(toward.case, AngleCase::GreaterPi);
        assert_eq!(toward.comparisons.directions(1e-12), [Ordering::Greater; 3]);
        let away = aleksandrov_lemma(Point2::new(-1.0, 0.0), b, Point2::new(1.0, 0.0), Point2::new(0.0, -0.2)).unwrap();
        assert_eq!(away.case, AngleCase::LessPi);
        assert_eq!(away.comparisons.directions(1e-12), [Ordering::Less; 3]);
    }

    #[test]
    fn collinear_rejected() {
        let e = aleksandrov_lemma(Point2::new(0.0, 0.0), Point2::new(0.0, 1.0), Point2::new(1.0, 0.0), Point2::new(0.0, 0.5));
        assert!(matches!(e, Err(Error::DegenerateInput(_))));
    }
}
