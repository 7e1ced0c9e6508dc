use std::path::PathBuf;
use std::process::{Command, Output};

use hfcosmetic_core::report::{BatchReport, KnotReport, SurgeryRecord};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfcosmetic")).args(args).current_dir(root()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_nine_44_json() {
    let o = run(&["check", "fixtures/9_44.cfk", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: KnotReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.verdict, "HFIndistinguishable");
    assert_eq!(r.surviving_pairs, vec![[1, 1], [2, 1]]);
    assert_eq!(r.invariants.q_star.as_deref(), Some("1/1"));
    assert_eq!(r.invariants.alexander, vec![1, -4, 7, -4, 1]);
}

#[test]
fn lens_prints_exact_values() {
    let o = run(&["lens", "2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/4\n-1/4\n");
    assert_eq!(stdout(&run(&["lens", "5", "2", "3"])), "0/1\n");
    assert_eq!(stdout(&run(&["lens", "2", "-1", "1"])), "1/4\n");
    let j: serde_json::Value = serde_json::from_str(&stdout(&run(&["--json", "lens", "3", "1"]))).unwrap();
    assert_eq!(j["values"][0]["d"], "1/2");
    assert_eq!(run(&["lens", "4", "2"]).status.code(), Some(1));
}

#[test]
fn failures_map_to_exit_codes() {
    let o = run(&["check", "does-not-exist.cfk"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).lines().count(), 1);
    assert!(stdout(&o).is_empty());

    let o = run(&["check", "fixtures/invalid/bad_grading.cfk"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
    assert_eq!(run(&["validate", "fixtures/invalid/bad_grading.cfk"]).status.code(), Some(2));
    assert_eq!(run(&["check", "fixtures/invalid/corrupt.cfk"]).status.code(), Some(1));

    assert_eq!(run(&["surgery", "fixtures/9_44.cfk"]).status.code(), Some(1));
    assert_eq!(run(&["surgery", "fixtures/9_44.cfk", "--slope", "2/4"]).status.code(), Some(1));
    assert_eq!(run(&["surgery", "fixtures/3_1.cfk", "--slope", "1/1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn validate_and_invariants() {
    let o = run(&["validate", "fixtures/4_1.cfk"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid"));
    let j: serde_json::Value = serde_json::from_str(&stdout(&run(&["invariants", "fixtures/9_44.cfk", "--json"]))).unwrap();
    assert_eq!(j["invariants"]["n"], serde_json::json!({ "-1": 2, "0": 4, "1": 2 }));
    assert_eq!(j["invariants"]["e"], serde_json::json!({ "-1,0": 1, "0,0": 2, "1,0": 1 }));
    let text = stdout(&run(&["invariants", "fixtures/3_1.cfk"]));
    assert!(text.contains("tau: 1") && text.contains("epsilon: 1") && text.contains("m: 1"));
}

#[test]
fn surgery_json_parses_back() {
    let o = run(&["surgery", "fixtures/9_44.cfk", "--slope", "2/1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: SurgeryRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.slope, [2, 1]);
    assert_eq!(r.total_rank, 10);
    assert!(r.matched);
    assert_eq!(r.sigma, Some(vec![1, 0]));
    assert_eq!(r.spin_c[0].d_plus, "1/4");
}

#[test]
fn batch_over_fixtures() {
    let o = run(&["batch", "fixtures", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: BatchReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.funnel.total, 15);
    assert_eq!(r.funnel.inconclusive, vec!["wide_inconclusive"]);
    assert_eq!(r.reports.len(), 15);

    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(root().join("fixtures/9_44.cfk"), dir.path().join("9_44.cfk")).unwrap();
    std::fs::copy(root().join("fixtures/invalid/corrupt.cfk"), dir.path().join("corrupt.cfk")).unwrap();
    let o = run(&["--json", "batch", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: BatchReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r.funnel.total, r.funnel.errors.len()), (1, 1));
    assert_eq!(r.funnel.errors[0].name, "corrupt.cfk");
    assert_eq!(run(&["batch", "no-such-dir"]).status.code(), Some(1));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("9_44.svg");
    let o = run(&["render", "fixtures/9_44.cfk", "--slope", "1/1", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("class=\"curve\"").count(), 5);
    assert_eq!(svg.matches("class=\"overlay\"").count(), 1);
    let other = dir.path().join("b.svg");
    run(&["render", "fixtures/9_44.cfk", "--slope", "1/1", "-o", other.to_str().unwrap()]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&other).unwrap());
    let bad = run(&["render", "fixtures/3_1.cfk", "-o", dir.path().join("c.svg").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["check", "fixtures/9_44.cfk", "--json"][..],
        &["batch", "fixtures", "--json"],
        &["batch", "fixtures"],
        &["surgery", "fixtures/thin_n2.cfk", "--slope", "1/1"],
        &["lens", "60", "7"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}
