//! Verified collapse of a chain of tetrahedra to a point.

use std::path::Path;

use cat0_collapse::engine::{run, EngineConfig};
use cat0_collapse::io::load_complex;

fn main() -> cat0_collapse::Result<()> {
    let (k, m) = load_complex(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/chain3_fin.json"))?;
    let t = run(&k, &m, &EngineConfig { n_samples: 2000, ..EngineConfig::default() })?;
    println!("{} after {} steps", t.outcome.as_str(), t.trace.steps.len());
    for (p, reports) in t.trace.steps.iter().zip(t.reports()) {
        let verdicts: Vec<String> = reports.iter().map(|r| format!("{}={}", r.check, r.verdict.as_str())).collect();
        println!("  remove {} via {}  {}", k.name(&p.coface), k.name(&p.free_face), verdicts.join(" "));
    }
    Ok(())
}
