//! Edge-link, four-point and comparison-triangle checks on a flat disk and a
//! positively curved one.

use std::path::Path;

use cat0_collapse::io::load_complex;
use cat0_collapse::verify::{
    cat0_triangle_sample_check, edge_link_check, four_point_sample_check, NeighborhoodSpec, SampleOptions,
};

fn main() -> cat0_collapse::Result<()> {
    for name in ["degree6", "degree5"] {
        let (k, m) = load_complex(&Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("fixtures/{name}.json")))?;
        let spec = NeighborhoodSpec::full_star(&k, &m, k.vertex_index("o").unwrap())?;
        let link = edge_link_check(&k, &m)?;
        let four = four_point_sample_check(&k, &m, spec, 2000, 0, 1e-7)?;
        let tri = cat0_triangle_sample_check(&k, &m, spec, 2000, 0, SampleOptions::default())?;
        for r in [link, four, tri] {
            println!("{name}: {} {} worst {:.6e}", r.check, r.verdict.as_str(), r.worst_violation);
        }
    }
    Ok(())
}
