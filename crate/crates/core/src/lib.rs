//! Piecewise-Euclidean simplicial complexes of dimension at most three:
//! comparison geometry, geodesics by unfolding, rerouting after elementary
//! collapses, sampled CAT(0) verification and a verified collapse engine.

pub mod cli;
pub mod complex;
pub mod engine;
pub mod error;
pub mod geodesic;
pub mod io;
pub mod metric;
pub mod verify;

pub use complex::{build_complex, collapse_sequence, CollapseOutcome, CollapseTrace, FreeFacePair, SimplexId, SimplicialComplex, Strategy};
pub use error::{Error, Result};
pub use metric::MetricAssignment;
pub use engine::{run, spine, EngineConfig, RunOutcome, VerifiedTrace};
pub use io::{emit_report, emit_trace, parse_complex};
