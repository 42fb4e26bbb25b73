//! Replacement geodesic after removing a tetrahedron, checked against the
//! subdivision-graph shortest path.

use std::path::Path;

use cat0_collapse::geodesic::{reroute_after_collapse, subdivision_oracle, SimplexPoint};
use cat0_collapse::io::load_complex;
use cat0_collapse::FreeFacePair;

fn main() -> cat0_collapse::Result<()> {
    let (k, m) = load_complex(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/wedge.json"))?;
    let sigma = k.simplex_from_labels(&["a", "b", "c", "d"])?;
    let alpha = k.simplex_from_labels(&["b", "c", "d"])?;
    let after = k.elementary_collapse(&FreeFacePair { coface: sigma, free_face: alpha })?;
    let a = k.vertex_index("a").unwrap();
    let cells: Vec<_> = after.maximal_simplices().into_iter().filter(|s| s.contains(a)).collect();
    for (from, to) in [
        ("a,b,d,x@0.45,0.45,0.05,0.05", "a,b,c,y@0.45,0.45,0.05,0.05"),
        ("a,b,d,x@0.4,0.1,0.4,0.1", "a,b,c,y@0.4,0.1,0.4,0.1"),
    ] {
        let (p, q) = (SimplexPoint::parse(&k, from)?, SimplexPoint::parse(&k, to)?);
        let r = reroute_after_collapse(&k, &m, sigma, alpha, &p, &q)?;
        let oracle = subdivision_oracle(&m.restrict_to(&after), &cells, &p, &q, 400)?;
        println!(
            "{from} -> {to}: old {:.9}, {} {:.9} (margin {:.3e}), oracle {:.9}",
            r.crossing.original_length,
            r.channel.as_str(),
            r.chosen.length,
            r.margin,
            oracle.length
        );
    }
    Ok(())
}
