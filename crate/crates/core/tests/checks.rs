mod common;

use std::f64::consts::PI;

use cat0_collapse::engine::{run, spine, EngineConfig, RunOutcome};
use cat0_collapse::geodesic::{
    balance_point_closed_form, extended_angle_check, reroute_after_collapse, subdivision_oracle, Channel, GeodesicEngine,
    SimplexPoint,
};
use cat0_collapse::verify::{
    betti_numbers_mod2, cat0_triangle_sample_check, edge_link_check, four_point_sample_check, homology_necessary_check,
    property_a_check, NeighborhoodSpec, SampleDomain, SampleOptions, Verdict,
};
use cat0_collapse::{build_complex, FreeFacePair, MetricAssignment, SimplexId, SimplicialComplex};
use common::{detail, fixture};

fn pair(k: &SimplicialComplex, sigma: &[&str], alpha: &[&str]) -> FreeFacePair {
    FreeFacePair { coface: k.simplex_from_labels(sigma).unwrap(), free_face: k.simplex_from_labels(alpha).unwrap() }
}

fn point(k: &SimplicialComplex, text: &str) -> SimplexPoint {
    SimplexPoint::parse(k, text).unwrap()
}

#[test]
fn homology_of_small_complexes() {
    assert_eq!(betti_numbers_mod2(&fixture("dunce").0), [1, 0, 0, 0]);
    assert!(homology_necessary_check(&fixture("dunce").0).passed());
    assert_eq!(betti_numbers_mod2(&fixture("hollow_triangle").0), [1, 1, 0, 0]);
    assert!(homology_necessary_check(&fixture("hollow_triangle").0).failed());
    assert!(homology_necessary_check(&fixture("tetra").0).passed());
}

#[test]
fn edge_links_of_disks() {
    let (k, m) = fixture("degree6");
    assert!(edge_link_check(&k, &m).unwrap().passed());
    let (k, m) = fixture("degree5");
    let r = edge_link_check(&k, &m).unwrap();
    assert!(r.failed());
    assert!((r.worst_violation - PI / 3.0).abs() < 1e-14);
    assert!(r.witness.is_some());
    let (k, m) = fixture("tetra");
    assert!(edge_link_check(&k, &m).unwrap().passed());
}

#[test]
fn positive_curvature_is_detected_by_sampling() {
    let (k, m) = fixture("degree5");
    let o = k.vertex_index("o").unwrap();
    let spec = NeighborhoodSpec::full_star(&k, &m, o).unwrap();
    let fp = four_point_sample_check(&k, &m, spec, 4000, 1, 1e-7).unwrap();
    assert!(fp.failed());
    assert!(fp.witness.is_some());
    let tri = cat0_triangle_sample_check(&k, &m, spec, 4000, 1, SampleOptions::default()).unwrap();
    assert!(tri.failed());
    let (k, m) = fixture("degree6");
    let spec = NeighborhoodSpec::full_star(&k, &m, k.vertex_index("o").unwrap()).unwrap();
    assert!(four_point_sample_check(&k, &m, spec, 2000, 1, 1e-7).unwrap().passed());
    assert!(cat0_triangle_sample_check(&k, &m, spec, 2000, 1, SampleOptions::default()).unwrap().passed());
}

#[test]
fn boundary_of_removed_tetrahedron_is_a_cone_point() {
    let (k, m) = fixture("tetra_fin");
    let p = k.free_faces().into_iter().find(|p| p.coface.dim() == 3).unwrap();
    let spec = NeighborhoodSpec::around_collapse(&k, &m, p).unwrap();
    let default = cat0_triangle_sample_check(&k, &m, spec, 2000, 0, SampleOptions::default()).unwrap();
    assert!(default.passed());
    let opts = SampleOptions { domain: SampleDomain::IncludeBoundary, ..SampleOptions::default() };
    let full = cat0_triangle_sample_check(&k, &m, spec, 2000, 0, opts).unwrap();
    assert!(full.failed());
    assert!(full.witness.is_some());
}

#[test]
fn two_face_neighbours_leave_positive_curvature() {
    let (k, m) = fixture("wedge");
    let spec = NeighborhoodSpec::around_collapse(&k, &m, pair(&k, &["a", "b", "c", "d"], &["b", "c", "d"])).unwrap();
    assert!(cat0_triangle_sample_check(&k, &m, spec, 2000, 0, SampleOptions::default()).unwrap().failed());
    assert!(four_point_sample_check(&k, &m, spec, 2000, 0, 1e-7).unwrap().failed());
}

#[test]
fn equal_channels_exist_for_every_wedge_metric() {
    for name in ["wedge", "wedge_perturbed"] {
        let (k, m) = fixture(name);
        let p = pair(&k, &["a", "b", "c", "d"], &["b", "c", "d"]);
        let r = property_a_check(&k, &m, p.coface, p.free_face, 1000, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Fail, "{name}");
        let margin: f64 = detail(&r, "min_abs_margin").unwrap().parse().unwrap();
        assert!(margin < 1e-12, "{name}: {margin}");
        let w = r.witness.unwrap();
        let value = |key: &str| w.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v).unwrap();
        let (direct, around, d) = (value("direct_length"), value("around_length"), value("distance_after_collapse"));
        assert!((direct - around).abs() < 1e-12);
        assert!((d - direct.min(around)).abs() < 1e-9, "{name}: {d} vs {direct}");
    }
}

#[test]
fn one_face_neighbour_has_no_crossing() {
    let (k, m) = fixture("tetra_fin");
    let p = k.free_faces().into_iter().find(|p| p.coface.dim() == 3).unwrap();
    let r = property_a_check(&k, &m, p.coface, p.free_face, 500, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(detail(&r, "guidance").is_some());
}

fn reroute_against_oracle(from: &str, to: &str) -> Channel {
    let (k, m) = fixture("wedge");
    let p = pair(&k, &["a", "b", "c", "d"], &["b", "c", "d"]);
    let (x, y) = (point(&k, from), point(&k, to));
    let r = reroute_after_collapse(&k, &m, p.coface, p.free_face, &x, &y).unwrap();
    let after = k.elementary_collapse(&p).unwrap();
    let a = k.vertex_index("a").unwrap();
    let cells: Vec<SimplexId> = after.maximal_simplices().into_iter().filter(|s| s.contains(a)).collect();
    let oracle = subdivision_oracle(&m.restrict_to(&after), &cells, &x, &y, 400).unwrap();
    assert!((r.chosen.length - oracle.length).abs() <= 1e-3 * oracle.length, "{} vs {}", r.chosen.length, oracle.length);
    assert!(r.margin > 0.0);
    r.channel
}

#[test]
fn reroute_channels() {
    // Mirror images across the plane through a, b and the midpoint of cd.
    reroute_against_oracle("a,b,d,x@0.3,0.3,0.3,0.1", "a,b,c,y@0.3,0.3,0.3,0.1");
    assert_eq!(reroute_against_oracle("a,b,d,x@0.45,0.45,0.05,0.05", "a,b,c,y@0.45,0.45,0.05,0.05"), Channel::ThroughS);
    assert_eq!(reroute_against_oracle("a,b,d,x@0.4,0.1,0.4,0.1", "a,b,c,y@0.4,0.1,0.4,0.1"), Channel::ThroughTV);
}

#[test]
fn extended_angle_with_endpoints_as_crossings() {
    let k = build_complex(&[vec!["a", "b", "c"], vec!["a", "b", "d"]]).unwrap();
    let m = MetricAssignment::standard(&k);
    let engine = GeodesicEngine::new(&k, &m).unwrap();
    let (p, q) = (point(&k, "a,b,c@0.2,0.3,0.5"), point(&k, "a,b,d@0.3,0.3,0.4"));
    let s = balance_point_closed_form(&m, &p, &q).unwrap().point().unwrap();
    let t = SimplexPoint::vertex(k.vertex_index("a").unwrap());
    let dist = |x: &SimplexPoint, y: &SimplexPoint| engine.distance(x, y);
    let toward = |from: &SimplexPoint, to: &SimplexPoint, u: f64| {
        let g = engine.geodesic(from, to)?;
        g.point_at(u / g.length, &m)
    };
    let r = extended_angle_check(dist, toward, &p, &q, &p, &q, &s, &t, 1e-6).unwrap();
    assert_eq!(r.verdict, Some(true));
    assert!((r.inner_sum - PI).abs() < 1e-6);
}

#[test]
fn engine_reports_replay() {
    let (k, m) = fixture("chain3_fin");
    let cfg = EngineConfig { n_samples: 400, seed: 11, ..EngineConfig::default() };
    let t = run(&k, &m, &cfg).unwrap();
    assert_eq!(t.outcome, RunOutcome::CollapsedToPoint);
    let prefixes = t.trace.replay().unwrap();
    for (i, (step, reports)) in t.trace.steps.iter().zip(t.reports()).enumerate() {
        if step.coface.dim() < 3 {
            assert!(reports.is_empty());
            continue;
        }
        let spec = NeighborhoodSpec::around_collapse(&prefixes[i], &m, *step).unwrap();
        let fresh = cat0_triangle_sample_check(&prefixes[i], &m, spec, 400, 11, SampleOptions::default()).unwrap();
        let logged = reports.iter().find(|r| r.check == "cat0_triangle_sample").unwrap();
        assert_eq!(&fresh, logged);
    }
}

#[test]
fn spines() {
    let (k, _) = fixture("two_tets_edge");
    let s = spine(&k);
    assert_eq!(s.count_by_dim()[3], 0);
    let (k, _) = fixture("degree6");
    assert_eq!(spine(&k), k);
    let (k, _) = fixture("tetra");
    assert_eq!(spine(&k).len(), 13);
}
