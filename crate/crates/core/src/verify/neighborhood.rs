//! Vertex neighbourhoods before and after an elementary 3-collapse.

use rand::Rng;

use super::sampling::uniform_in;
use crate::complex::{FreeFacePair, SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geodesic::{chord, EngineOptions, GeodesicEngine, SimplexPoint};
use crate::metric::MetricAssignment;

/// Ball of chord radius `radius` about `center` in the star of `center`,
/// optionally in the complex left after removing a free pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeighborhoodSpec {
    pub center: u32,
    pub radius: f64,
    pub removed: Option<FreeFacePair>,
}

impl NeighborhoodSpec {
    pub fn new(center: u32, radius: f64, removed: Option<FreeFacePair>) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        if let Some(pair) = removed {
            if !pair.coface.contains(center) {
                return Err(Error::Domain("the centre must be a vertex of the removed simplex".into()));
            }
        }
        Ok(NeighborhoodSpec { center, radius, removed })
    }

    /// Neighbourhood of the vertex opposite the free face of a 3-collapse,
    /// with radius the longest edge of the tetrahedron.
    pub fn around_collapse(k: &SimplicialComplex, metric: &MetricAssignment, pair: FreeFacePair) -> Result<Self> {
        let sigma = pair.coface;
        if sigma.dim() != 3 || pair.free_face.dim() != 2 || !k.is_free(&pair) {
            return Err(Error::UnsupportedConfiguration("expected a free triangle of a tetrahedron".into()));
        }
        let a = sigma.opposite(&pair.free_face).unwrap();
        let r = sigma.edge_index_pairs().into_iter().map(|(i, j)| metric.len(sigma.vertices()[i], sigma.vertices()[j])).fold(0.0, f64::max);
        Self::new(a, r, Some(pair))
    }

    /// Ball covering the whole star of `center`.
    pub fn full_star(k: &SimplicialComplex, metric: &MetricAssignment, center: u32) -> Result<Self> {
        let r = k
            .maximal_simplices()
            .into_iter()
            .filter(|s| s.contains(center))
            .flat_map(|s| s.vertices().to_vec())
            .map(|v| if v == center { 0.0 } else { metric.len(center, v) })
            .fold(0.0, f64::max);
        Self::new(center, r, None)
    }
}

/// Where sample points are drawn from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SampleDomain {
    /// Cells of the neighbourhood that are not faces of the removed simplex.
    #[default]
    ExcludeRemoved,
    /// Every cell of the neighbourhood, boundary of the removed simplex included.
    IncludeBoundary,
}

/// A built neighbourhood: geodesic engines after (and, for a collapse,
/// before) the removal, and the cells points are drawn from.
pub struct Neighborhood {
    pub spec: NeighborhoodSpec,
    pub before: SimplicialComplex,
    pub after: SimplicialComplex,
    pub metric: MetricAssignment,
    pub engine_after: GeodesicEngine,
    pub engine_before: Option<GeodesicEngine>,
    pub domain_cells: Vec<SimplexId>,
}

const REJECTION_TRIES: usize = 64;

impl Neighborhood {
    pub fn build(k: &SimplicialComplex, metric: &MetricAssignment, spec: NeighborhoodSpec, domain: SampleDomain) -> Result<Self> {
        let a = spec.center;
        if !k.contains(&SimplexId::vertex(a)) {
            return Err(Error::UnknownVertex(format!("vertex {a} is not in the complex")));
        }
        let after = match spec.removed {
            Some(pair) => k.elementary_collapse(&pair)?,
            None => k.clone(),
        };
        let star = |c: &SimplicialComplex| c.maximal_simplices().into_iter().filter(|s| s.contains(a)).collect::<Vec<_>>();
        let cells_after = star(&after);
        let engine_after = GeodesicEngine::with_cells(&after, metric, &cells_after, EngineOptions::default())?;
        let engine_before = match spec.removed {
            Some(_) => Some(GeodesicEngine::with_cells(k, metric, &star(k), EngineOptions::default())?),
            None => None,
        };
        let domain_cells = match (spec.removed, domain) {
            (Some(pair), SampleDomain::ExcludeRemoved) => cells_after.into_iter().filter(|c| !c.is_face_of(&pair.coface)).collect(),
            _ => cells_after,
        };
        Ok(Neighborhood { spec, before: k.clone(), after, metric: metric.clone(), engine_after, engine_before, domain_cells })
    }

    pub fn sigma(&self) -> Option<SimplexId> {
        self.spec.removed.map(|p| p.coface)
    }

    /// A uniform point of a uniformly chosen domain cell within the radius,
    /// or `None` when rejection sampling gives up.
    pub fn sample_point(&self, rng: &mut impl Rng) -> Option<SimplexPoint> {
        if self.domain_cells.is_empty() {
            return None;
        }
        let a = SimplexPoint::vertex(self.spec.center);
        for _ in 0..REJECTION_TRIES {
            let cell = &self.domain_cells[rng.random_range(0..self.domain_cells.len())];
            let x = uniform_in(cell, rng);
            if chord(&self.metric, &a, &x).is_ok_and(|d| d <= self.spec.radius) {
                return Some(x);
            }
        }
        None
    }

    /// Face-neighbours of the removed tetrahedron inside the star of the
    /// centre; old geodesics can only cross it between two of them.
    pub fn face_neighbours(&self) -> usize {
        let Some(sigma) = self.sigma() else { return 0 };
        self.before
            .maximal_simplices()
            .into_iter()
            .filter(|s| *s != sigma && s.contains(self.spec.center))
            .filter(|s| s.intersection(&sigma).is_some_and(|f| f.dim() == 2))
            .count()
    }
}
