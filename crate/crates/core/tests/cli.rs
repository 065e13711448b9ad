use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_techcx");

fn techcx(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(cwd).env_remove("TECHCX_WORKERS").output().unwrap()
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn synth_corpus(dir: &Path) {
    std::fs::write(
        dir.join("spec.json"),
        r#"{"technologies": 6, "patents_per_year": {"ordered": 15, "complex": 15, "random": 15},
            "years": [2000, 2007], "codes_per_patent": [2, 4], "codes_per_technology": 40,
            "regimes": ["ordered", "complex", "random"], "regions": 16, "region_skew": 0.2,
            "inventors_per_patent": [1, 3], "seed": 4}"#,
    )
    .unwrap();
    ok(&techcx(&["synth", "corpus", "--spec", "spec.json", "--out", "patents.csv"], dir));
    ok(&techcx(&["ingest", "--input", "patents.csv", "--out", "corpus.bin"], dir));
}

#[test]
fn structural_compute_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth_corpus(d);
    let args = |out: &'static str, workers: &'static str| {
        vec![
            "--workers",
            workers,
            "compute",
            "--corpus",
            "corpus.bin",
            "--measure",
            "structural",
            "--window-year",
            "2007",
            "--seed",
            "7",
            "--out",
            out,
        ]
    };
    ok(&techcx(&args("a", "1"), d));
    ok(&techcx(&args("b", "3"), d));
    let a = std::fs::read(d.join("a/scores.csv")).unwrap();
    let b = std::fs::read(d.join("b/scores.csv")).unwrap();
    assert!(a.len() > 40);
    assert_eq!(a, b);
    let cfg: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("a/config.json")).unwrap()).unwrap();
    assert_eq!(cfg["seed"], 7);
    assert_eq!(cfg["sampling"]["seed"], 7);
    assert_eq!(cfg["years"], serde_json::json!([2007]));
}

#[test]
fn all_measures_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth_corpus(d);
    ok(&techcx(&["compute", "--corpus", "corpus.bin", "--measure", "all", "--years", "2006,2007", "--out", "o"], d));
    let text = std::fs::read_to_string(d.join("o/scores.csv")).unwrap();
    let skipped: Vec<serde_json::Value> =
        serde_json::from_slice(&std::fs::read(d.join("o/skipped.json")).unwrap()).unwrap();
    for m in ["hh-fine", "hh-coarse", "hh-eigen", "fs-modular", "structural"] {
        let present = text.lines().any(|l| l.split(',').nth(1) == Some(m));
        let reported = skipped.iter().any(|s| s["measure"] == m);
        assert!(present || reported, "{m}");
    }

    // Re-running one measure replaces its rows instead of duplicating them.
    ok(&techcx(&["compute", "--corpus", "corpus.bin", "--measure", "hh-fine", "--years", "2007", "--out", "o"], d));
    assert_eq!(std::fs::read_to_string(d.join("o/scores.csv")).unwrap(), text);

    ok(&techcx(&["report", "--scores", "o/scores.csv", "--corpus", "corpus.bin", "--out", "rep"], d));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("rep/report.json")).unwrap()).unwrap();
    assert_eq!(report["years"], serde_json::json!([2006, 2007]));
    let trend = std::fs::read_to_string(d.join("rep/trend.csv")).unwrap();
    assert!(trend.starts_with("x,series,value\n"));
    assert!(trend.contains("median-patents"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth_corpus(d);
    std::fs::write(
        d.join("run.json"),
        r#"{"corpus": "corpus.bin", "measures": ["hh-coarse"], "years": [2005], "seed": 3}"#,
    )
    .unwrap();
    ok(&techcx(&["compute", "--config", "run.json", "--window-year", "2006", "--out", "c"], d));
    let cfg: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("c/config.json")).unwrap()).unwrap();
    assert_eq!(cfg["years"], serde_json::json!([2006]));
    assert_eq!(cfg["measures"], serde_json::json!(["hh-coarse"]));
    assert_eq!(cfg["seed"], 3);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = techcx(&["compute", "--corpus", "x.bin", "--measure", "complexity"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for m in ["hh-fine", "hh-coarse", "hh-eigen", "fs-modular", "structural"] {
        assert!(err.contains(m), "{err}");
    }
    std::fs::write(dir.path().join("bad.json"), r#"{"seeed": 1}"#).unwrap();
    let out = techcx(&["compute", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.csv"), "id,year\n1,2000\n").unwrap();
    let out = techcx(&["ingest", "--input", "p.csv", "--out", "c.bin"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("codes"));
}

#[test]
fn synth_network_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    ok(&techcx(
        &["synth", "network", "--kind", "random", "--n", "200", "--p", "0.04", "--seed", "7", "--out", "g.txt"],
        dir.path(),
    ));
    let text = std::fs::read_to_string(dir.path().join("g.txt")).unwrap();
    let g = techcx::netgen::read_edge_list(text.as_bytes()).unwrap();
    assert_eq!(g.node_count(), 200);
    assert!(text.lines().all(|l| l.split(' ').count() == 2));
}
