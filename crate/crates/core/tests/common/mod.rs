#![allow(dead_code)]

use std::path::PathBuf;

use cat0_collapse::io::load_complex;
use cat0_collapse::{MetricAssignment, SimplicialComplex};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> (SimplicialComplex, MetricAssignment) {
    load_complex(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const ALL_FIXTURES: [&str; 21] = [
    "bipyramid",
    "bipyramid_fin",
    "chain3",
    "chain3_fin",
    "chain3_perturbed",
    "degree5",
    "degree6",
    "dunce",
    "hollow_triangle",
    "path",
    "point",
    "star4",
    "star4_fin",
    "star_perturbed",
    "star_perturbed_fin",
    "tetra",
    "tetra_fin",
    "tetra_perturbed",
    "two_tets_edge",
    "wedge",
    "wedge_perturbed",
];

/// Fixtures with a collapsible, nonpositively curved closure used for
/// per-step sampling.
pub const FIN_CORPUS: [&str; 5] = ["tetra_fin", "bipyramid_fin", "chain3_fin", "star4_fin", "star_perturbed_fin"];

pub fn detail<'a>(r: &'a cat0_collapse::verify::CheckReport, key: &str) -> Option<&'a str> {
    r.details.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Planar apex over the segment from (0,0) to (ab,0), on the side `sign`,
/// by the law of cosines.
pub fn planar_apex(ab: f64, from_a: f64, from_b: f64, sign: f64) -> (f64, f64) {
    let x = (ab * ab + from_a * from_a - from_b * from_b) / (2.0 * ab);
    (x, sign * (from_a * from_a - x * x).max(0.0).sqrt())
}
