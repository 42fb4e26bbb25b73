//! Searches for equal-length replacement channels around a removed
//! tetrahedron and prints the tie it finds.

use std::path::Path;

use cat0_collapse::io::{emit_report, load_complex};
use cat0_collapse::verify::property_a_check;

fn main() -> cat0_collapse::Result<()> {
    let (k, m) = load_complex(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/wedge_perturbed.json"))?;
    let sigma = k.simplex_from_labels(&["a", "b", "c", "d"])?;
    let alpha = k.simplex_from_labels(&["b", "c", "d"])?;
    let r = property_a_check(&k, &m, sigma, alpha, 1000, 0)?;
    print!("{}", emit_report(&k, &r));
    Ok(())
}
