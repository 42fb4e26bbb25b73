use super::Point2;
use crate::error::{Error, Result};

/// Distances among `x₁, y₁, x₂, y₂`, indexed in that order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourTuple {
    pub d: [[f64; 4]; 4],
}

pub const X1: usize = 0;
pub const Y1: usize = 1;
pub const X2: usize = 2;
pub const Y2: usize = 3;

impl FourTuple {
    pub fn from_table(d: [[f64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            if d[i][i] != 0.0 {
                return Err(Error::MalformedInput("distance table has a nonzero diagonal".into()));
            }
            for j in 0..4 {
                if !(d[i][j] >= 0.0) || d[i][j] != d[j][i] {
                    return Err(Error::MalformedInput("distance table is not symmetric and nonnegative".into()));
                }
            }
        }
        Ok(FourTuple { d })
    }

    /// Table of a metric given as a closure on indices.
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(mut f: F) -> Result<Self> {
        let mut d = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let v = f(i, j);
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        Self::from_table(d)
    }

    pub fn from_planar(p: &[Point2; 4]) -> Self {
        Self::from_fn(|i, j| (p[i] - p[j]).norm()).expect("planar distances are a metric")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Subembedding {
    pub exists: bool,
    /// `x̄₁, ȳ₁, x̄₂, ȳ₂`, present when `exists`.
    pub witness: Option<[Point2; 4]>,
    /// `|x̄₁x̄₂| − d(x₁,x₂)` and `|ȳ₁ȳ₂| − d(y₁,y₂)` at the best configuration
    /// found; negative values measure the failure.
    pub slack: [f64; 2],
}

/// Places `x̄₁ = 0`, `x̄₂ = (D, 0)` and returns the four reflection choices
/// for `ȳ₁, ȳ₂` with their y-diagonals.
fn placements(a: f64, b: f64, c: f64, e: f64, dx: f64) -> [([Point2; 4], f64); 4] {
    let x1 = Point2::zeros();
    let x2 = Point2::new(dx, 0.0);
    let apex = |r1: f64, r2: f64| {
        if dx <= 0.0 {
            return Point2::new(0.0, r1);
        }
        let x = (r1 * r1 + dx * dx - r2 * r2) / (2.0 * dx);
        Point2::new(x, (r1 * r1 - x * x).max(0.0).sqrt())
    };
    let (y1, y2) = (apex(a, b), apex(e, c));
    let mut out = [([x1; 4], 0.0); 4];
    for (k, (s1, s2)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].into_iter().enumerate() {
        let p = Point2::new(y1.x, s1 * y1.y);
        let q = Point2::new(y2.x, s2 * y2.y);
        out[k] = ([x1, p, x2, q], (p - q).norm());
    }
    out
}

fn widest(a: f64, b: f64, c: f64, e: f64, dx: f64) -> ([Point2; 4], f64) {
    placements(a, b, c, e, dx).into_iter().fold(([Point2::zeros(); 4], f64::NEG_INFINITY), |m, p| if p.1 > m.1 { p } else { m })
}

/// Planar configuration with the four cross distances exact and both
/// diagonals no shorter than in `t`.
///
/// The x-diagonal ranges over the interval allowed by the two cross
/// triangles; the y-diagonal is maximised over the reflection choices at
/// each candidate x-diagonal.
pub fn subembedding_check(t: &FourTuple, tol: f64) -> Subembedding {
    let d = &t.d;
    let (a, b, c, e) = (d[X1][Y1], d[Y1][X2], d[X2][Y2], d[Y2][X1]);
    let (dx_need, dy_need) = (d[X1][X2], d[Y1][Y2]);
    let scale = d.iter().flatten().fold(0.0f64, |m, x| m.max(*x)).max(f64::MIN_POSITIVE);
    let slop = tol * scale;
    let lo = (a - b).abs().max((c - e).abs());
    let hi = (a + b).min(c + e);
    let fail = |slack: [f64; 2]| Subembedding { exists: false, witness: None, slack };
    if lo > hi + slop {
        return fail([hi - lo, f64::NEG_INFINITY]);
    }
    let start = dx_need.max(lo).min(hi.max(lo));
    if start > hi + slop {
        return fail([hi - dx_need, f64::NEG_INFINITY]);
    }
    let eval = |dx: f64| widest(a, b, c, e, dx);
    let (w0, y0) = eval(start);
    let mut best = (start, w0, y0);
    if y0 < dy_need - slop && hi > start {
        const N: usize = 64;
        let h = (hi - start) / N as f64;
        for i in 1..=N {
            let dx = start + h * i as f64;
            let (w, y) = eval(dx);
            if y > best.2 {
                best = (dx, w, y);
            }
        }
        // Golden-section refinement around the best grid point.
        let (mut l, mut r) = ((best.0 - h).max(start), (best.0 + h).min(hi));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let m1 = r - g * (r - l);
            let m2 = l + g * (r - l);
            if eval(m1).1 >= eval(m2).1 {
                r = m2;
            } else {
                l = m1;
            }
        }
        let mid = 0.5 * (l + r);
        let (w, y) = eval(mid);
        if y > best.2 {
            best = (mid, w, y);
        }
    }
    let slack = [best.0 - dx_need, best.2 - dy_need];
    if slack[0] >= -slop && slack[1] >= -slop {
        // Report the feasible reflection with the least y-slack.
        let (w, y) = placements(a, b, c, e, best.0)
            .into_iter()
            .filter(|p| p.1 >= dy_need - slop)
            .fold((best.1, best.2), |m, p| if p.1 < m.1 { p } else { m });
        Subembedding { exists: true, witness: Some(w), slack: [slack[0], y - dy_need] }
    } else {
        fail(slack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_points_embed_tightly() {
        let p = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.2), Point2::new(1.3, 1.1), Point2::new(-0.2, 0.9)];
        let s = subembedding_check(&FourTuple::from_planar(&p), 1e-12);
        assert!(s.exists);
        assert!(s.slack[0].abs() < 1e-12 && s.slack[1].abs() < 1e-12);
    }

    #[test]
    fn regular_tetrahedron_vertices() {
        let t = FourTuple::from_fn(|_, _| 1.0).unwrap();
        let s = subembedding_check(&t, 1e-12);
        assert!(s.exists);
        let w = s.witness.unwrap();
        assert!(((w[0] - w[1]).norm() - 1.0).abs() < 1e-12);
        assert!((w[1] - w[3]).norm() >= 1.0);
    }

    #[test]
    fn triangle_violation_has_no_embedding() {
        // d(x1,y1) + d(y1,x2) < d(x1,x2).
        let t = FourTuple::from_fn(|i, j| if (i, j) == (X1, X2) { 3.0 } else { 1.0 }).unwrap();
        assert!(!subembedding_check(&t, 1e-12).exists);
    }
}
