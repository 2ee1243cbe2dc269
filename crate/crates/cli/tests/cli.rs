use proptest::prelude::*;
use std::path::Path;
use wh_embed::{DirectivityGrid, C64};
use wh_embed_cli::{emit_csv, parse_csv, run, HEADER};

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wh-embed").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn grid(theta: Vec<f64>, theta_i: Vec<f64>) -> DirectivityGrid {
    let values = theta_i
        .iter()
        .map(|&ti| theta.iter().map(|&t| C64::new((t - ti).sin(), t * ti)).collect())
        .collect();
    DirectivityGrid {
        theta,
        theta_i,
        values,
        k: 1.0,
        convention: "test".into(),
        max_boundary_residual: 0.0,
    }
}

#[test]
fn wedge_factorization_exits_zero() {
    let (code, out, _) = exec(&["wedge", "verify-factorization"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS factorization_residual"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn impossible_tolerance_exits_one() {
    let (code, out, _) = exec(&["--tol", "1e-30", "wedge", "verify-mapped"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL mapped_ratio_deviation"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["wedge"],
        &["strip", "solve", "--ka", "0", "--theta-i", "30", "--out", "x.csv"],
        &["--tol", "-1", "wedge", "verify-mapped"],
        &["halfplane", "verify", "--grid", "many"],
    ] {
        let (code, _, err) = exec(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains("usage: wh-embed"), "{err}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exec(&["--help"]).0, 0);
    assert_eq!(exec(&["--version"]).0, 0);
}

#[test]
fn json_report_records_tolerance_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, _, _) = exec(&["--json", path.to_str().unwrap(), "--tol", "1e-9", "wedge", "embed"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["parameters"]["tol_applies_to"][0], "embedding_residual");
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    let e = checks.iter().find(|c| c["name"] == "embedding_residual").unwrap();
    assert_eq!(e["tolerance"], 1e-9);
}

#[test]
fn figure3_has_two_incidences() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let (code, _, err) = exec(&["strip", "figure3", "--ka", "2", "--points", "37", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let rows = parse_csv(&path).unwrap();
    assert_eq!(rows.len(), 74);
    assert!((rows[0].theta_i_deg - 45.0).abs() < 1e-12);
    assert!((rows[37].theta_i_deg - 90.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| (r.re.hypot(r.im) - r.abs).abs() <= 1e-14 * r.abs.max(1.0)));
}

#[test]
fn halfplane_directivity_marks_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let (code, out, _) = exec(&["halfplane", "directivity", "--theta-i", "60", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("written as NaN"));
    let rows = parse_csv(&path).unwrap();
    assert_eq!(rows.len(), 181);
    assert_eq!(rows.iter().filter(|r| r.re.is_nan()).count(), 1);
    assert!(rows[120].re.is_nan());
}

#[test]
fn unwritable_output_is_a_compute_error() {
    let (code, _, err) = exec(&["wedge", "directivity", "--theta-i", "125", "--out", "/nonexistent/dir/w.csv"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/dir/w.csv"));
}

#[test]
fn header_only_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    assert_eq!(emit_csv(&grid(vec![], vec![1.0]), &path).unwrap(), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), HEADER.join(","));
    assert!(parse_csv(&path).unwrap().is_empty());
}

#[test]
fn wrong_header_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "a,b,c,d,e\n1,2,3,4,5\n").unwrap();
    assert!(parse_csv(&path).is_err());
    assert!(parse_csv(Path::new("/nonexistent.csv")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip_is_exact(
        theta in prop::collection::vec(-10.0f64..10.0, 1..20),
        theta_i in prop::collection::vec(-4.0f64..4.0, 1..4),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let g = grid(theta, theta_i);
        let n = emit_csv(&g, &path).unwrap();
        let rows = parse_csv(&path).unwrap();
        prop_assert_eq!(n, rows.len());
        prop_assert_eq!(n, g.theta.len() * g.theta_i.len());
        let mut it = rows.iter();
        for (ti, row) in g.theta_i.iter().zip(&g.values) {
            for (t, s) in g.theta.iter().zip(row) {
                let r = it.next().unwrap();
                prop_assert_eq!(r.theta_deg, t.to_degrees());
                prop_assert_eq!(r.theta_i_deg, ti.to_degrees());
                prop_assert_eq!(r.re, s.re);
                prop_assert_eq!(r.im, s.im);
                prop_assert_eq!(r.abs, s.norm());
            }
        }
    }

    #[test]
    fn unknown_subcommands_exit_two(word in "[a-z]{3,10}") {
        prop_assume!(!["halfplane", "strip", "wedge", "all", "help"].contains(&word.as_str()));
        prop_assert_eq!(exec(&[&word]).0, 2);
        prop_assert_eq!(exec(&["wedge", &word]).0, 2);
    }

    #[test]
    fn nonpositive_ka_exits_two(ka in -100.0f64..=0.0) {
        let s = ka.to_string();
        let code = exec(&["strip", "solve", &format!("--ka={s}"), "--theta-i", "30", "--out", "x.csv"]).0;
        prop_assert_eq!(code, 2);
    }

    #[test]
    fn wedge_directivity_any_incidence(theta_i in 1.0f64..269.0) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        let t = theta_i.to_string();
        let (code, _, err) = exec(&["wedge", "directivity", "--theta-i", &t, "--points", "31", "--out", path.to_str().unwrap()]);
        prop_assert_eq!(code, 0, "{}", err);
        prop_assert_eq!(parse_csv(&path).unwrap().len(), 31);
    }
}
