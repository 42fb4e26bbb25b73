use super::comparison::angle_unchecked;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleEstimate {
    pub value: f64,
    pub uncertainty: f64,
    pub samples_used: usize,
}

/// Estimates the angle between two unit-speed geodesics `c`, `c′` from a
/// common point.
///
/// `gap(s, t)` returns `d(c(s), c′(t))`. Comparison angles are taken on the
/// product grid `s, t ∈ {t₀·2⁻ᵏ}` for `⌈K/2⌉ ≤ k ≤ K`; the estimate is their
/// maximum and the uncertainty their spread.
pub fn alexandrov_angle_estimate<F>(mut gap: F, t0: f64, halvings: u32) -> Result<AngleEstimate>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    if !(t0 > 0.0) {
        return Err(Error::Domain(format!("initial parameter {t0} must be positive")));
    }
    let k0 = halvings.div_ceil(2);
    let params: Vec<f64> = (k0..=halvings).map(|k| t0 * 0.5f64.powi(k as i32)).collect();
    let (mut lo, mut hi, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
    for &s in &params {
        for &t in &params {
            let g = gap(s, t)?;
            if !(g >= 0.0) {
                return Err(Error::Domain(format!("distance at ({s}, {t}) is {g}")));
            }
            // Clamp rounding excess over s + t before measuring.
            let a = angle_unchecked(g.min(s + t), s, t);
            lo = lo.min(a);
            hi = hi.max(a);
            n += 1;
        }
    }
    Ok(AngleEstimate { value: hi, uncertainty: hi - lo, samples_used: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Point2;

    #[test]
    fn flat_rays() {
        let th = 0.7f64;
        let u = Point2::new(1.0, 0.0);
        let w = Point2::new(th.cos(), th.sin());
        let est = alexandrov_angle_estimate(|s, t| Ok((u * s - w * t).norm()), 0.5, 20).unwrap();
        assert!((est.value - th).abs() < 1e-9);
        assert!(est.uncertainty < 1e-9);
    }

    #[test]
    fn identical_paths() {
        let est = alexandrov_angle_estimate(|s, t| Ok((s - t).abs()), 1.0, 10).unwrap();
        assert!(est.value.abs() < 1e-12);
    }

    #[test]
    fn undefined_evaluator() {
        let r = alexandrov_angle_estimate(|s, _| if s < 0.1 { Err(Error::Domain("short".into())) } else { Ok(0.0) }, 1.0, 10);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
