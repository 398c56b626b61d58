use std::process::{Command, Output};

use serde_json::Value;

const CURVE: &str = "Z^3+(X^2+X*Y^2)*Z+X^2*Y";
const HIDDEN: &str = "Z^4+(Y-X)^4*Z^2+(Y+3*X)^8";

fn nhpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhpoly")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_curve_example() {
    let v = json(&nhpoly(&["analyze", "--equation", CURVE, "--epsilon", "inf"]));
    assert_eq!(v["compact_face_counts"], serde_json::json!([3, 2]));
    let facets: Vec<&Value> = v["faces"].as_array().unwrap().iter().filter(|f| f["dim"] == 1).collect();
    assert_eq!(facets.len(), 2);
    for f in facets {
        assert_eq!(f["rationality"]["verdict"]["kind"], "non_rational");
        assert_eq!(f["rationality"]["agree"], true);
    }
    assert_eq!(v["audit"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn sweep_threshold_two() {
    let v = json(&nhpoly(&["sweep", "--equation", CURVE, "--qmax", "10"]));
    let t: Vec<&str> = v["thresholds"].as_array().unwrap().iter().map(|t| t["value"].as_str().unwrap()).collect();
    assert_eq!(t, vec!["2"]);
    assert_eq!(v["leftmost_matches_infinitesimal"], true);
}

#[test]
fn render_matches_report_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("meta.json");
    let args = ["render", "--equation", HIDDEN, "--epsilon", "2/7", "--format", "tikz", "--json", meta.to_str().unwrap()];
    let a = nhpoly(&args);
    assert!(a.status.success());
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert!(text.contains("(1.750000,0.000000)") && text.contains("(0.000000,1.750000)"));
    assert_eq!(nhpoly(&args).stdout, a.stdout);

    let report = json(&nhpoly(&["polytope", "--equation", HIDDEN, "--epsilon", "2/7"]));
    let decimals = report["point_decimals"].as_array().unwrap();
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    let verts = meta["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 2);
    for v in verts {
        assert!(decimals.contains(v), "vertex {v} missing from the report");
    }
}

#[test]
fn svg_and_infinitesimal_sample_metadata() {
    let out = nhpoly(&["render", "--equation", CURVE, "--format", "svg"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.contains("points placed at epsilon"));
}

#[test]
fn input_file_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("eq.txt");
    let out = dir.path().join("t.txt");
    std::fs::write(&input, "Z^2+2*X*Z+X^3\n").unwrap();
    let r = nhpoly(&["tchirnhausen", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "X^3 - X^2 + Z^2\n");
}

#[test]
fn other_subcommands_map_onto_the_library() {
    let c = json(&nhpoly(&["compare", "--equation", "Z^4+(Y^2+X*Y)*Z^2+X^4", "--epsilon", "classical", "--epsilon-b", "inf"]));
    assert_eq!(c["every_a_covered"], true);
    let k = json(&nhpoly(&["contract", "--equation", "Z^2+2*X*Z+X^2"]));
    assert_eq!(k["contractions"].as_array().unwrap().len(), 1);
    let s = json(&nhpoly(&["segments", "--equation", "Z^2+(Y-X)^2"]));
    assert_eq!(s[0]["exact_binomial"], true);
    let p = json(&nhpoly(&["permissible", "--equation", "Z^2+X*Y*Z"]));
    assert_eq!(p.as_array().unwrap().len(), 3);
    let f = json(&nhpoly(&["permissible", "--equation", "Z^3+(X^2+X*Y^2)*Z+X^2*Y", "--vars", "X"]));
    assert_eq!(f["permissible"], false);
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        vec!["analyze", "--equation", "Z^3+X"],
        vec!["analyze", "--equation", "Z^2+X^2", "--field", "fp:4"],
        vec!["polytope", "--equation", "Z^2+X^2", "--epsilon", "-1"],
        vec!["render", "--equation", "Z^2+X*Y*W"],
        vec!["render", "--equation", "Z^2+X1^2+X2^2+X3^2"],
        vec!["permissible", "--equation", "Z^2+X^2", "--vars", "Q"],
        vec!["sweep"],
    ] {
        let out = nhpoly(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
