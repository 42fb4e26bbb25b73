mod common;

use std::process::{Command, Output};

use common::fixture_path;
use serde_json::Value;

fn cat0(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cat0")).args(args).output().unwrap()
}

fn f(name: &str) -> String {
    fixture_path(name).display().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn validate_exit_codes() {
    let o = cat0(&["validate", &f("tetra")]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "pass");
    for name in ["degree5", "hollow_triangle", "dunce"] {
        let o = cat0(&["validate", &f(name)]);
        assert_eq!(code(&o), 1, "{name}");
        assert_eq!(json(&o)["verdict"], "fail");
    }
}

#[test]
fn dunce_passes_homology_but_not_links() {
    let v = json(&cat0(&["validate", &f("dunce")]));
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports[0]["check"], "homology_necessary");
    assert_eq!(reports[0]["verdict"], "pass");
    assert_eq!(reports[1]["verdict"], "fail");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format_version\": \"1\",\n  \"vertices\": [\"a\" \"b\"]}").unwrap();
    let o = cat0(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let neg = dir.path().join("neg.json");
    std::fs::write(
        &neg,
        r#"{"format_version": "1", "vertices": ["a", "b"], "maximal_simplices": [["a", "b"]], "edge_lengths": {"a,b": -1}}"#,
    )
    .unwrap();
    assert_eq!(code(&cat0(&["validate", neg.to_str().unwrap()])), 2);
    assert_eq!(code(&cat0(&["validate", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&cat0(&["collapse", &f("tetra"), "--samples", "0"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    let o = cat0(&["validate", "--nope", &f("tetra")]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(code(&cat0(&["bogus"])), 2);
    assert_eq!(code(&cat0(&[])), 2);
    assert_eq!(code(&cat0(&["--help"])), 0);
}

#[test]
fn check_cat0_exit_codes() {
    let o = cat0(&["check-cat0", &f("degree5"), "--samples", "200"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let link = &v["reports"][0];
    assert_eq!(link["check"], "edge_link");
    assert_eq!(link["verdict"], "fail");
    assert!(link.get("witness").is_some());
    let o = cat0(&["check-cat0", &f("degree6"), "--samples", "200"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "pass");
    let o = cat0(&["check-cat0", &f("tetra_fin"), "--sigma", "a,b,c,d", "--alpha", "b,c,d", "--samples", "200"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn property_a_exit_codes() {
    let o = cat0(&["property-a", &f("wedge"), "--sigma", "a,b,c,d", "--alpha", "b,c,d", "--samples", "300"]);
    assert_eq!(code(&o), 1);
    let r = &json(&o)["reports"][0];
    assert_eq!(r["verdict"], "fail");
    assert!(r["witness"].is_object());
    let o = cat0(&["property-a", &f("tetra_fin")]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "inconclusive");
    // bcd is not free in the wedge once a second tetrahedron sits on it.
    assert_eq!(code(&cat0(&["property-a", &f("wedge"), "--sigma", "a,b,c,d", "--alpha", "a,b,c"])), 2);
}

#[test]
fn geodesic_queries() {
    let reroute = cat0(&[
        "geodesic",
        &f("wedge"),
        "--from",
        "a,b,d,x@0.4,0.1,0.4,0.1",
        "--to",
        "a,b,c,y@0.4,0.1,0.4,0.1",
        "--sigma",
        "a,b,c,d",
        "--alpha",
        "b,c,d",
    ]);
    assert_eq!(code(&reroute), 0);
    let v = json(&reroute);
    assert_eq!(v["query"], "reroute");
    let (chosen, oracle) = (v["chosen"]["length"].as_f64().unwrap(), v["oracle_length"].as_f64().unwrap());
    assert!((chosen - oracle).abs() <= 0.01 * oracle);
    let balance = cat0(&["geodesic", &f("wedge"), "--from", "a,b,d@0.2,0.3,0.5", "--to", "a,b,c@0.2,0.3,0.5", "--edge", "a,b"]);
    assert_eq!(code(&balance), 0);
    assert_eq!(json(&balance)["query"], "balance_point");
    let plain = cat0(&["geodesic", &f("tetra"), "--from", "a", "--to", "b"]);
    assert_eq!(code(&plain), 0);
    assert!((json(&plain)["path"]["length"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(code(&cat0(&["geodesic", &f("tetra"), "--from", "a,q@0.5,0.5", "--to", "b"])), 2);
}

#[test]
fn collapse_exit_codes() {
    let o = cat0(&["collapse", &f("tetra"), "--verify"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["outcome"], "collapsed_to_point");
    assert_eq!(v["steps_taken"], 7);
    let o = cat0(&["collapse", &f("dunce")]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["outcome"], "stuck_no_free_face");
    assert_eq!(v["steps_taken"], 0);
    assert!(v["stuck"].is_object());
    let o = cat0(&["collapse", &f("chain3"), "--no-verify", "--strategy", "greedy-lex"]);
    assert_eq!(code(&o), 0);
    // Listing σ's free face first makes σ the first tetrahedron removed,
    // while both of its other faces at the apex carry tetrahedra.
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(fixture_path("wedge")).unwrap()).unwrap();
    doc["vertices"] = serde_json::json!(["b", "c", "d", "a", "x", "y"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wedge_sigma_first.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = cat0(&["collapse", path.to_str().unwrap(), "--samples", "300"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["outcome"], "verification_failed");
    assert_eq!(v["steps_taken"], 1);
    assert_eq!(v["steps"][0]["coface"], serde_json::json!(["b", "c", "d", "a"]));
}

#[test]
fn out_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["collapse", "chain3_fin", "--samples", "200"],
        &["check-cat0", "degree6", "--samples", "100", "--seed", "4"],
        &["property-a", "wedge", "--samples", "200", "--seed", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut bytes = Vec::new();
        for (j, workers) in ["1", "2"].iter().enumerate() {
            let out = dir.path().join(format!("{i}_{j}.json"));
            let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
            full[1] = f(args[1]);
            full.extend(["--out".to_string(), out.display().to_string()]);
            let o = Command::new(env!("CARGO_BIN_EXE_cat0")).args(&full).env("CAT0_COLLAPSE_WORKERS", workers).output().unwrap();
            assert!(o.stdout.is_empty());
            bytes.push(std::fs::read(&out).unwrap());
        }
        assert!(!bytes[0].is_empty());
        assert_eq!(bytes[0], bytes[1], "{args:?}");
    }
}
