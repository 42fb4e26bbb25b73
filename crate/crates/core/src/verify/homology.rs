//! Mod-2 Betti numbers.

use std::collections::BTreeMap;

use super::report::{CheckReport, Verdict, Witness};
use crate::complex::{SimplexId, SimplicialComplex};

/// Rank over GF(2) of columns given as bit vectors.
fn rank_gf2(mut cols: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let mut pivots: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for col in cols.iter_mut() {
        loop {
            let Some(top) = highest_bit(col) else { break };
            match pivots.get(&top) {
                Some(p) => {
                    for (a, b) in col.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots.insert(top, col.clone());
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().rev().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Mod-2 Betti numbers `b₀ … b₃`.
pub fn betti_numbers_mod2(k: &SimplicialComplex) -> [usize; 4] {
    let by_dim: Vec<Vec<SimplexId>> = (0..4).map(|d| k.of_dim(d).copied().collect()).collect();
    let index: Vec<BTreeMap<SimplexId, usize>> =
        by_dim.iter().map(|v| v.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
    // rank[d] = rank of the boundary map from d-chains to (d − 1)-chains.
    let mut rank = [0usize; 5];
    for d in 1..4 {
        let words = by_dim[d - 1].len().div_ceil(64);
        let cols = by_dim[d]
            .iter()
            .map(|s| {
                let mut c = vec![0u64; words];
                for f in s.facets() {
                    let i = index[d - 1][&f];
                    c[i / 64] |= 1 << (i % 64);
                }
                c
            })
            .collect();
        rank[d] = rank_gf2(cols);
    }
    let mut b = [0usize; 4];
    for d in 0..4 {
        b[d] = by_dim[d].len() - rank[d] - rank[d + 1];
    }
    b
}

/// Necessary condition for contractibility: `b₀ = 1`, `b₁ = b₂ = 0`.
pub fn homology_necessary_check(k: &SimplicialComplex) -> CheckReport {
    let b = betti_numbers_mod2(k);
    let ok = b[0] == 1 && b[1] == 0 && b[2] == 0;
    let excess = (b[0] as f64 - 1.0).abs() + (b[1] + b[2]) as f64;
    let mut r = CheckReport::new("homology_necessary", if ok { Verdict::Pass } else { Verdict::Fail }, excess);
    for (d, v) in b.iter().enumerate() {
        r = r.detail(&format!("b{d}"), v);
    }
    if !ok {
        r = r.with_witness(Witness {
            description: format!("mod-2 Betti numbers {b:?}"),
            values: b.iter().enumerate().map(|(d, v)| (format!("b{d}"), *v as f64)).collect(),
            ..Witness::default()
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn small_complexes() {
        let tet = build_complex(&[vec!["a", "b", "c", "d"]]).unwrap();
        assert_eq!(betti_numbers_mod2(&tet), [1, 0, 0, 0]);
        let hollow = build_complex(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap();
        assert_eq!(betti_numbers_mod2(&hollow), [1, 1, 0, 0]);
        assert!(homology_necessary_check(&hollow).failed());
        let sphere = build_complex(&[vec!["a", "b", "c"], vec!["a", "b", "d"], vec!["a", "c", "d"], vec!["b", "c", "d"]]).unwrap();
        assert_eq!(betti_numbers_mod2(&sphere), [1, 0, 1, 0]);
        let two = build_complex(&[vec!["a"], vec!["b"]]).unwrap();
        assert_eq!(betti_numbers_mod2(&two), [2, 0, 0, 0]);
    }
}
