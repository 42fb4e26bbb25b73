//! Balance point on the hinge of two triangles, by unfolding and by angle
//! bisection, and the detour inequality around it.

use cat0_collapse::geodesic::{
    balance_point_bisection, balance_point_closed_form, chord, detour_inequality_check, GeodesicEngine, SimplexPoint,
};
use cat0_collapse::metric::comparison_angle;
use cat0_collapse::{build_complex, MetricAssignment};

fn main() -> cat0_collapse::Result<()> {
    let k = build_complex(&[vec!["a", "b", "c"], vec!["a", "b", "d"]])?;
    let mut m = MetricAssignment::standard(&k);
    m.set(0, 2, 1.3);
    m.set(1, 3, 0.8);
    m.validate(&k)?;
    let p = SimplexPoint::parse(&k, "a,b,c@0.2,0.3,0.5")?;
    let q = SimplexPoint::parse(&k, "a,b,d@0.5,0.1,0.4")?;
    let closed = balance_point_closed_form(&m, &p, &q)?.point().expect("chord crosses ab");
    let bisect = balance_point_bisection(&m, &p, &q, 50)?.point().expect("chord crosses ab");
    println!("closed form s = {}", closed.describe(&k));
    println!("bisection   s = {}", bisect.describe(&k));
    // Angle at s between each point and a, from the three chords.
    let a = SimplexPoint::vertex(0);
    let at_s = |x: &SimplexPoint| -> cat0_collapse::Result<f64> {
        comparison_angle(chord(&m, x, &a)?, chord(&m, &closed, x)?, chord(&m, &closed, &a)?)
    };
    let angle_sum = at_s(&p)? + at_s(&q)?;
    println!("angle sum at s = {angle_sum:.15}");
    let engine = GeodesicEngine::new(&k, &m)?;
    for t in [0.1, 0.5, 0.9] {
        let t = SimplexPoint::on_edge(0, 1, t);
        let c = detour_inequality_check(|x, y| engine.distance(x, y), &p, &q, &closed, &t, angle_sum, 1e-9)?;
        println!("detour through {}: margin {:.6e}", t.describe(&k), c.margin);
    }
    Ok(())
}
