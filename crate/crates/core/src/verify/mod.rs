//! Structural and sampled curvature checks.

mod cat0;
mod four_point;
mod homology;
mod link;
mod neighborhood;
mod property_a;
mod report;
pub mod sampling;

pub use cat0::{cat0_triangle_sample_check, SampleOptions, Stratum};
pub use four_point::four_point_sample_check;
pub use homology::{betti_numbers_mod2, homology_necessary_check};
pub use link::{edge_link_check, LINK_TOL};
pub use neighborhood::{Neighborhood, NeighborhoodSpec, SampleDomain};
pub use property_a::{property_a_check, EQUALITY_TOL};
pub use report::{CheckReport, Verdict, Witness};
