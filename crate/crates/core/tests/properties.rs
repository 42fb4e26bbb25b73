mod common;

use cat0_collapse::engine::{run, spine, EngineConfig, RunOutcome};
use cat0_collapse::geodesic::{
    balance_point_bisection, balance_point_closed_form, path_length, Crossing, PiecewisePath, SimplexPoint,
};
use cat0_collapse::io::emit_document;
use cat0_collapse::verify::sampling::uniform_in;
use cat0_collapse::verify::{cat0_triangle_sample_check, four_point_sample_check, NeighborhoodSpec, SampleOptions};
use cat0_collapse::{build_complex, collapse_sequence, parse_complex, CollapseOutcome, MetricAssignment, Strategy};
use common::{fixture, ALL_FIXTURES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const COLLAPSIBLE: [&str; 10] =
    ["tetra", "tetra_fin", "bipyramid", "chain3", "chain3_fin", "star4", "wedge", "two_tets_edge", "degree6", "path"];

fn permutation(n: usize, seed: u64) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}

/// Lengths scaled edge by edge within ±`spread`, kept only when realizable.
fn scaled(name: &str, factors: &[f64]) -> Option<(cat0_collapse::SimplicialComplex, MetricAssignment)> {
    let (k, mut m) = fixture(name);
    for (e, f) in k.edges().copied().collect::<Vec<_>>().iter().zip(factors.iter().cycle()) {
        let v = e.vertices();
        m.set(v[0], v[1], m.len(v[0], v[1]) * f);
    }
    m.validate(&k).ok().map(|_| (k, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn documents_round_trip(idx in 0..ALL_FIXTURES.len(), factors in prop::collection::vec(0.85f64..1.15, 1..12)) {
        let Some((k, m)) = scaled(ALL_FIXTURES[idx], &factors) else { return Ok(()) };
        let text = emit_document(&k, &m, None);
        let (k2, m2) = parse_complex(&text).unwrap();
        prop_assert_eq!(&k2, &k);
        prop_assert_eq!(&m2, &m);
        prop_assert_eq!(emit_document(&k2, &m2, None), text);
    }

    #[test]
    fn successful_collapses_take_half_the_simplices(idx in 0..COLLAPSIBLE.len(), seed in any::<u64>()) {
        let (k, _) = fixture(COLLAPSIBLE[idx]);
        let k = k.relabeled(&permutation(k.labels().len(), seed)).unwrap();
        for strategy in [Strategy::Prefer3Simplices, Strategy::GreedyLex] {
            match collapse_sequence(&k, strategy) {
                CollapseOutcome::Collapsed(t) => {
                    prop_assert_eq!(t.steps.len(), (k.len() - 1) / 2);
                    prop_assert_eq!(t.final_complex().unwrap().len(), 1);
                }
                CollapseOutcome::NoFreeFace(s) => prop_assert!(strategy == Strategy::GreedyLex, "stuck at {}", s.step),
            }
        }
    }

    #[test]
    fn tetrahedra_go_first(idx in 0..COLLAPSIBLE.len(), seed in any::<u64>()) {
        let (k, _) = fixture(COLLAPSIBLE[idx]);
        let k = k.relabeled(&permutation(k.labels().len(), seed)).unwrap();
        let CollapseOutcome::Collapsed(t) = collapse_sequence(&k, Strategy::Prefer3Simplices) else {
            return Err(TestCaseError::fail("collapsible fixture got stuck"));
        };
        let dims: Vec<usize> = t.steps.iter().map(|p| p.coface.dim()).collect();
        prop_assert!(dims.windows(2).all(|w| w[0] >= w[1]), "coface dimensions {dims:?}");
    }

    #[test]
    fn spine_is_idempotent_and_flat(idx in 0..ALL_FIXTURES.len(), seed in any::<u64>()) {
        let (k, _) = fixture(ALL_FIXTURES[idx]);
        let k = k.relabeled(&permutation(k.labels().len(), seed)).unwrap();
        let s = spine(&k);
        prop_assert_eq!(s.count_by_dim()[3], 0);
        prop_assert_eq!(spine(&s), s.clone());
        prop_assert!(s.check_invariants());
    }

    #[test]
    fn unverified_engine_matches_combinatorial_collapse(idx in 0..COLLAPSIBLE.len()) {
        let (k, m) = fixture(COLLAPSIBLE[idx]);
        let t = run(&k, &m, &EngineConfig { verify_each_step: false, ..EngineConfig::default() }).unwrap();
        prop_assert_eq!(t.outcome, RunOutcome::CollapsedToPoint);
        prop_assert_eq!(t.trace.steps.len(), (k.len() - 1) / 2);
    }

    #[test]
    fn one_flat_cell_has_no_violation(lengths in prop::collection::vec(0.6f64..1.4, 6), seed in any::<u64>(), tet in any::<bool>()) {
        let cell: Vec<&str> = if tet { vec!["a", "b", "c", "d"] } else { vec!["a", "b", "c"] };
        let k = build_complex(&[cell]).unwrap();
        let mut m = MetricAssignment::standard(&k);
        for (e, l) in k.edges().copied().collect::<Vec<_>>().iter().zip(&lengths) {
            m.set(e.vertices()[0], e.vertices()[1], *l);
        }
        prop_assume!(m.validate(&k).is_ok());
        let spec = NeighborhoodSpec::full_star(&k, &m, 0).unwrap();
        let r = cat0_triangle_sample_check(&k, &m, spec, 40, seed, SampleOptions::default()).unwrap();
        prop_assert!(r.passed());
        prop_assert!(r.worst_violation < 1e-12, "worst {}", r.worst_violation);
        let f = four_point_sample_check(&k, &m, spec, 20, seed, 1e-7).unwrap();
        prop_assert!(f.passed());
    }

    #[test]
    fn sampled_checks_are_reproducible(seed in any::<u64>()) {
        let (k, m) = fixture("degree6");
        let o = k.vertex_index("o").unwrap();
        let spec = NeighborhoodSpec::full_star(&k, &m, o).unwrap();
        let a = cat0_triangle_sample_check(&k, &m, spec, 30, seed, SampleOptions::default()).unwrap();
        let b = cat0_triangle_sample_check(&k, &m, spec, 30, seed, SampleOptions::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn balance_routes_agree(lengths in prop::collection::vec(0.5f64..1.5, 5), seed in any::<u64>()) {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["a", "b", "d"]]).unwrap();
        let mut m = MetricAssignment::standard(&k);
        for ((a, b), l) in [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)].into_iter().zip(&lengths) {
            m.set(a, b, *l);
        }
        prop_assume!(m.validate(&k).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = uniform_in(&k.simplex_from_labels(&["a", "b", "c"]).unwrap(), &mut rng);
        let q = uniform_in(&k.simplex_from_labels(&["a", "b", "d"]).unwrap(), &mut rng);
        let closed = balance_point_closed_form(&m, &p, &q).unwrap();
        let bisect = balance_point_bisection(&m, &p, &q, 50).unwrap();
        match (closed, bisect) {
            (Crossing::Interior(x), Crossing::Interior(y)) => prop_assert!((x.weight(1) - y.weight(1)).abs() < 1e-9),
            (Crossing::NoInteriorCrossing { nearest: x }, Crossing::NoInteriorCrossing { nearest: y }) => prop_assert_eq!(x, y),
            // A chord through an edge end is on the boundary of both verdicts.
            (Crossing::Interior(x), _) | (_, Crossing::Interior(x)) => {
                prop_assert!(x.weight(1) < 1e-9 || x.weight(1) > 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn path_length_is_additive(w in prop::collection::vec(0.01f64..1.0, 9)) {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["b", "c", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let abc = k.simplex_from_labels(&["a", "b", "c"]).unwrap();
        let bcd = k.simplex_from_labels(&["b", "c", "d"]).unwrap();
        let x = SimplexPoint::new(abc, &normalize(&w[0..3])).unwrap();
        let y = SimplexPoint::on_edge(1, 2, w[3] / (w[3] + w[4]));
        let z = SimplexPoint::new(bcd, &normalize(&w[5..8])).unwrap();
        let first = PiecewisePath::new(vec![x, y], &m).unwrap();
        let second = PiecewisePath::new(vec![y, z], &m).unwrap();
        let whole = PiecewisePath::new(vec![x, y, z], &m).unwrap();
        prop_assert_eq!(path_length(&first.concat(&second), &m).unwrap(), whole.length);
        prop_assert_eq!(first.length + second.length, whole.length);
    }
}

fn normalize(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}
