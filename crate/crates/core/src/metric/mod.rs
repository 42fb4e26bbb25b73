//! Edge-length metrics and flat comparison geometry.

mod aleksandrov;
mod angle;
pub(crate) mod comparison;
mod realize;
mod subembedding;

use std::collections::BTreeMap;

pub use aleksandrov::{aleksandrov_lemma, AleksandrovRecord, AngleCase, LemmaComparisons};
pub use angle::{alexandrov_angle_estimate, AngleEstimate};
pub use comparison::{comparison_angle, comparison_points, triangle_curvature, ComparisonTriangle};
pub use realize::{
    cayley_menger, dihedral_angle, realize_tetrahedron, realize_triangle, tetrahedron_volume, Point2, Point3,
};
pub use subembedding::{subembedding_check, FourTuple, Subembedding};

use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};

/// Numerical tolerances shared by every construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Planar constructions and barycentric sums.
    pub planar: f64,
    /// Realizations in 3-space.
    pub spatial: f64,
}

pub const TOLERANCES: Tolerances = Tolerances { planar: 1e-12, spatial: 1e-10 };

/// Positive length per edge.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MetricAssignment {
    lengths: BTreeMap<SimplexId, f64>,
}

impl MetricAssignment {
    /// Every edge of `k` gets length `value`.
    pub fn uniform(k: &SimplicialComplex, value: f64) -> Self {
        MetricAssignment { lengths: k.edges().map(|e| (*e, value)).collect() }
    }

    /// The standard metric: all edges of length 1.
    pub fn standard(k: &SimplicialComplex) -> Self {
        Self::uniform(k, 1.0)
    }

    pub fn from_lengths(lengths: BTreeMap<SimplexId, f64>) -> Self {
        MetricAssignment { lengths }
    }

    pub fn set(&mut self, a: u32, b: u32, value: f64) {
        self.lengths.insert(SimplexId::edge(a, b), value);
    }

    pub fn length(&self, a: u32, b: u32) -> Option<f64> {
        if a == b {
            return Some(0.0);
        }
        self.lengths.get(&SimplexId::edge(a, b)).copied()
    }

    /// Length of `a`-`b`; panics when the edge is absent.
    pub fn len(&self, a: u32, b: u32) -> f64 {
        self.length(a, b).unwrap_or_else(|| panic!("no length for edge ({a},{b})"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SimplexId, &f64)> {
        self.lengths.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Pairwise lengths among the vertices of `s`, indexed as `s.vertices()`.
    pub fn simplex_lengths(&self, s: &SimplexId) -> Result<[[f64; 4]; 4]> {
        let v = s.vertices();
        let mut l = [[0.0; 4]; 4];
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let x = self
                    .length(v[i], v[j])
                    .ok_or_else(|| Error::MissingLength(format!("{}-{}", v[i], v[j])))?;
                l[i][j] = x;
                l[j][i] = x;
            }
        }
        Ok(l)
    }

    /// Keeps exactly the edges of `k`.
    pub fn restrict_to(&self, k: &SimplicialComplex) -> Self {
        MetricAssignment {
            lengths: self.lengths.iter().filter(|(e, _)| k.contains(e)).map(|(e, l)| (*e, *l)).collect(),
        }
    }

    /// Positivity, strict triangle inequalities and positive Cayley–Menger
    /// volume for every simplex of `k`; no lengths outside `k`.
    pub fn validate(&self, k: &SimplicialComplex) -> Result<()> {
        for e in k.edges() {
            let v = e.vertices();
            match self.lengths.get(e) {
                None => return Err(Error::MissingLength(k.name(e))),
                Some(&x) if !(x > 0.0) || !x.is_finite() => {
                    return Err(Error::NegativeLength { edge: k.name(e), value: x })
                }
                _ => {}
            }
            debug_assert_eq!(v.len(), 2);
        }
        if let Some(e) = self.lengths.keys().find(|e| !k.contains(e)) {
            return Err(Error::UnknownEdge(
                e.vertices().iter().map(|&v| k.labels().get(v as usize).cloned().unwrap_or_default()).collect::<Vec<_>>().join(","),
            ));
        }
        for s in k.simplices() {
            let l = self.simplex_lengths(s)?;
            match s.dim() {
                2 => {
                    if realize_triangle(l[0][1], l[1][2], l[0][2]).is_err() {
                        let (a, b, c) = (l[0][1], l[1][2], l[0][2]);
                        let det = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c);
                        return Err(Error::Unrealizable { simplex: k.name(s), determinant: det });
                    }
                }
                3 => {
                    if realize_tetrahedron(&tet_lengths(&l)).is_err() {
                        return Err(Error::Unrealizable { simplex: k.name(s), determinant: cayley_menger(&tet_lengths(&l)) });
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// The six lengths of a tetrahedron in the order `01,02,03,12,13,23`.
pub(crate) fn tet_lengths(l: &[[f64; 4]; 4]) -> [f64; 6] {
    [l[0][1], l[0][2], l[0][3], l[1][2], l[1][3], l[2][3]]
}

/// Squared Euclidean distance between two barycentric points of one simplex
/// with pairwise lengths `l`: `-1/2 Σ δᵢδⱼ ℓᵢⱼ²` with `δ = λ − μ`.
pub fn barycentric_distance(l: &[[f64; 4]; 4], lam: &[f64], mu: &[f64]) -> f64 {
    let n = lam.len();
    let mut d = [0.0; 4];
    for i in 0..n {
        d[i] = lam[i] - mu[i];
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s -= d[i] * d[j] * l[i][j] * l[i][j];
        }
    }
    s.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn standard_metric_validates() {
        let k = build_complex(&[vec!["a", "b", "c", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        assert!(m.validate(&k).is_ok());
    }

    #[test]
    fn flat_tetrahedron_rejected() {
        let k = build_complex(&[vec!["a", "b", "c", "d"]]).unwrap();
        let mut m = MetricAssignment::standard(&k);
        // a,b,c equilateral and d at the centre of bc: no volume.
        m.set(0, 3, 3f64.sqrt() / 2.0);
        m.set(1, 3, 0.5);
        m.set(2, 3, 0.5);
        assert!(matches!(m.validate(&k), Err(Error::Unrealizable { .. })));
    }

    #[test]
    fn barycentric_distance_matches_coordinates() {
        let l = [[0.0, 1.0, 1.0, 0.0], [1.0, 0.0, 1.0, 0.0], [1.0, 1.0, 0.0, 0.0], [0.0; 4]];
        let d = barycentric_distance(&l, &[1.0, 0.0, 0.0], &[0.0, 0.5, 0.5]);
        assert!((d - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
