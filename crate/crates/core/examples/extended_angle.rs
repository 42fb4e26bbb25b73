//! Measures, on a wedge of three regular tetrahedra, how far the balance
//! point of the crossing points sits from the one of the full endpoints, and
//! whether the angle inequality carries over to the endpoints.

use std::path::Path;

use cat0_collapse::geodesic::{extended_angle_check, reroute_after_collapse, GeodesicEngine, SimplexPoint};
use cat0_collapse::io::load_complex;
use cat0_collapse::verify::sampling::{sample_rng, uniform_in};

fn main() -> cat0_collapse::Result<()> {
    let (k, m) = load_complex(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/wedge.json"))?;
    let sigma = k.simplex_from_labels(&["a", "b", "c", "d"])?;
    let alpha = k.simplex_from_labels(&["b", "c", "d"])?;
    let (cp, cq) = (k.simplex_from_labels(&["a", "b", "d", "x"])?, k.simplex_from_labels(&["a", "b", "c", "y"])?);
    let (a, b) = (k.vertex_index("a").unwrap(), k.vertex_index("b").unwrap());
    let before = GeodesicEngine::new(&k, &m)?;
    let (mut gaps, mut holds, mut fails, mut unsure) = (Vec::new(), 0, 0, 0);
    for i in 0..2000 {
        let mut rng = sample_rng(5, i);
        let (p, q) = (uniform_in(&cp, &mut rng), uniform_in(&cq, &mut rng));
        let Ok(r) = reroute_after_collapse(&k, &m, sigma, alpha, &p, &q) else { continue };
        let (Some(s1), Some(s)) = (r.crossing.s_from_crossings.point(), r.direct.points.get(1).copied()) else { continue };
        gaps.push((s1.weight(b) - s.weight(b)).abs());
        let dist = |x: &SimplexPoint, y: &SimplexPoint| before.distance(x, y);
        let toward = |from: &SimplexPoint, to: &SimplexPoint, u: f64| {
            let g = before.geodesic(from, to)?;
            g.point_at(u / g.length, &m)
        };
        let t = SimplexPoint::vertex(a);
        let c = extended_angle_check(dist, toward, &p, &q, &r.crossing.p1, &r.crossing.q1, &s1, &t, 1e-6)?;
        match c.verdict {
            Some(true) => holds += 1,
            Some(false) => fails += 1,
            None => unsure += 1,
        }
    }
    gaps.sort_by(f64::total_cmp);
    let differ = gaps.iter().filter(|g| **g > 1e-9).count();
    println!("{} crossing samples; balance points differ on {differ}", gaps.len());
    if let (Some(max), Some(med)) = (gaps.last(), gaps.get(gaps.len() / 2)) {
        println!("gap along ab: max {max:.4}, median {med:.4}");
    }
    println!("angle inequality for the endpoints: {holds} hold, {fails} fail, {unsure} inconclusive");
    Ok(())
}
