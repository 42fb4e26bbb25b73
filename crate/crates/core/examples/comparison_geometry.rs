//! Comparison triangles, curvature of realized angles and the straightening
//! of a bent planar quadruple.

use cat0_collapse::metric::{aleksandrov_lemma, ComparisonTriangle, Point2};

fn main() -> cat0_collapse::Result<()> {
    let t = ComparisonTriangle::new(1.0, 1.2, 0.9)?;
    println!("angles {:?}, curvature {:.3e}", t.angles, t.curvature());
    let (a, b, c) = (Point2::new(-1.0, 0.3), Point2::new(0.2, 1.0), Point2::new(1.0, -0.4));
    for d in [Point2::new(0.0, 0.0), Point2::new(0.1, 0.4), Point2::new(-0.1, -0.5)] {
        let r = aleksandrov_lemma(a, b, c, d)?;
        println!("d = ({}, {}): {:?}, angle sum {:.6}, directions {:?}", d.x, d.y, r.case, r.angle_sum, r.comparisons.directions(1e-10));
    }
    Ok(())
}
