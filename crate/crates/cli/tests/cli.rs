use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn homforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homforge"))
        .args(args)
        .output()
        .unwrap()
}

fn homforge_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_homforge"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_z2_addition() {
    let out = homforge(&["check", path(&fixture("z2-addition.json")), "--twist"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hom_associative"], true);
    assert_eq!(v["alpha"]["bijective"], true);
    assert!(v["degeneracy"]["strong"].is_null());
    assert_eq!(v["twist"]["is_twist"], true);
}

#[test]
fn check_constant_table_reports_witness() {
    let out = homforge(&["check", path(&fixture("constant-table.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["degeneracy"]["strong"],
        serde_json::json!([0, 1])
    );
}

#[test]
fn check_reads_standard_input() {
    let text = std::fs::read_to_string(fixture("z2-addition.json")).unwrap();
    let out = homforge_stdin(&["check", "-"], &text);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hom_associative"], true);
}

#[test]
fn check_rejects_out_of_range_entry() {
    let out = homforge(&["check", path(&fixture("entry-out-of-range.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("index out of range"));
}

#[test]
fn check_flags_violation() {
    let out = homforge(&["check", path(&fixture("not-hom-associative.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["hom_associative"], false);
    assert!(v["violation"].is_array());
}

#[test]
fn search_counts() {
    for (args, expected) in [
        (vec!["--size", "1"], 1),
        (vec!["--size", "2", "--alpha", "identity"], 8),
        (vec!["--size", "2"], 22),
        (vec!["--size", "2", "--alpha", "surjective"], 14),
        (vec!["--size", "2", "--twist", "twist"], 16),
        (vec!["--size", "2", "--degeneracy", "strong"], 8),
        (vec!["--size", "2", "--no-hom-assoc"], 64),
        (vec!["--size", "3", "--canonical"], 556),
    ] {
        let mut full = vec!["search", "--count"];
        full.extend(&args);
        let out = homforge(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["count"], expected, "{args:?}");
    }
}

#[test]
fn search_stream_round_trips() {
    let out = homforge(&["search", "--size", "2", "--alpha", "surjective"]);
    let items = lines(&out);
    assert_eq!(items.len(), 14);
    for item in items {
        let h: homforge::FiniteHomStructure = serde_json::from_value(item.clone()).unwrap();
        assert_eq!(serde_json::to_value(&h).unwrap(), item);
    }
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let one = Command::new(env!("CARGO_BIN_EXE_homforge"))
        .args(["search", "--size", "3"])
        .env("HOMFORGE_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_homforge"))
        .args(["search", "--size", "3"])
        .env("HOMFORGE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(lines(&one).len(), 3243);
}

#[test]
fn search_hunt_and_expect() {
    let out = homforge(&[
        "search",
        "--size",
        "2",
        "--twist",
        "non-twist",
        "--hunt",
        "--expect",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out),
        serde_json::json!({"size": 2, "table": [[0, 0], [0, 1]], "alpha": [0, 0]})
    );
    let none = homforge(&[
        "search",
        "--size",
        "3",
        "--alpha",
        "surjective",
        "--degeneracy",
        "not-strong",
        "--twist",
        "non-twist",
        "--hunt",
        "--expect",
    ]);
    assert_eq!(none.status.code(), Some(1));
    assert!(none.stdout.is_empty());
}

#[test]
fn search_fixed_alpha_and_budget() {
    let out = homforge(&["search", "--size", "2", "--alpha", "fixed:1,0", "--count"]);
    assert_eq!(
        json(&out)["constraints"]["alpha_filter"]["fixed"],
        serde_json::json!([1, 0])
    );
    let over = homforge(&["search", "--size", "9", "--count"]);
    assert_eq!(over.status.code(), Some(2));
    let bad = homforge(&["search", "--size", "2", "--alpha", "fixed:0,5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_sweeps_pass() {
    for args in [
        vec!["--prop", "1", "--max-size", "2"],
        vec!["--prop", "2", "--max-size", "2"],
        vec!["--prop", "lemma1", "--max-size", "2"],
        vec!["--prop", "nat", "--bound", "10"],
    ] {
        let mut full = vec!["verify"];
        full.extend(&args);
        let out = homforge(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        assert_eq!(v["pass"], true);
        assert!(v["violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_successor_with_identity_shift() {
    let out = homforge(&["verify", "--prop", "nat", "--bound", "10", "--shift", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sizes"]["10"]["twist"], 1);
}

#[test]
fn deform_check_trivial() {
    let out = homforge(&[
        "deform",
        "check",
        path(&fixture("trivial-deformation.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hom_associativity_defect"]["zero"], true);
}

#[test]
fn deform_invert_identity_and_round_trip() {
    let id = fixture("identity-series.json");
    let out = homforge(&["deform", "invert", path(&id)]);
    let want: Value = serde_json::from_str(&std::fs::read_to_string(&id).unwrap()).unwrap();
    assert_eq!(json(&out), want);

    let s = fixture("series.json");
    let inv = homforge(&["deform", "invert", path(&s)]);
    let back = homforge_stdin(
        &["deform", "invert", "-"],
        &String::from_utf8(inv.stdout).unwrap(),
    );
    let want: Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(json(&back), want);
}

#[test]
fn deform_untwist_reports_order_zero() {
    let out = homforge(&["deform", "untwist", path(&fixture("deformation.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["associative"], true);
    assert_eq!(v["order0"], v["nu"][0]);
    assert_eq!(
        v["order0"],
        serde_json::json!([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    );
}

#[test]
fn deform_untwist_refuses_degenerate_base() {
    let out = homforge(&[
        "deform",
        "untwist",
        path(&fixture("strongly-degenerate.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "violated");
}

#[test]
fn deform_transport_then_equiv() {
    let dir = tempfile::tempdir().unwrap();
    let moved = dir.path().join("moved.json");
    let phi = fixture("phi.json");
    let src = fixture("deformation.json");
    let out = homforge(&["deform", "transport", "--phi", path(&phi), path(&src)]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&moved, &out.stdout).unwrap();
    let eq = homforge(&[
        "deform",
        "equiv",
        "--phi",
        path(&phi),
        path(&src),
        path(&moved),
    ]);
    assert_eq!(eq.status.code(), Some(0));
    assert_eq!(json(&eq)["equivalent"], true);
    let ne = homforge(&[
        "deform",
        "equiv",
        "--phi",
        path(&phi),
        path(&src),
        path(&src),
    ]);
    assert_eq!(ne.status.code(), Some(1));
}

#[test]
fn deform_twist_and_conjugate() {
    let out = homforge(&["deform", "twist", path(&fixture("twisting.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["mu"][0],
        serde_json::json!([[[0, 1], [0, 0]], [[0, 0], [1, 0]]])
    );

    let out = homforge(&["deform", "conjugate", path(&fixture("conjugation.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["alpha_prime"],
        serde_json::json!([[1, 0], [0, 2]])
    );
}

#[test]
fn deform_nondeg_is_seeded() {
    let f = fixture("trivial-deformation.json");
    let a = homforge(&[
        "deform",
        "nondeg",
        path(&f),
        "--trials",
        "50",
        "--seed",
        "3",
    ]);
    let b = homforge(&[
        "deform",
        "nondeg",
        path(&f),
        "--trials",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);
}

#[test]
fn malformed_json_is_an_input_error() {
    let out = homforge_stdin(&["deform", "check", "-"], "{\"p\": 4}");
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "input");
}
