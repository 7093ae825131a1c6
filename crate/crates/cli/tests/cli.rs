use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn incompat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incompat"))
        .args(args)
        .current_dir(dir)
        .env_remove("INCOMPAT_BUDGET_OVERRIDE")
        .output()
        .unwrap()
}

fn generate(dir: &Path, args: &[&str], name: &str) -> PathBuf {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", name]);
    let out = incompat(&full, dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn fixtures_are_the_listed_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), &["paper-expli-B"], "b.json");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(v["label"], "paper-expli-B");
    assert_eq!(v["dim"], 2);
    let r = -(2.0 * 3f64.sqrt() - 1.25).sqrt();
    let b5 = &v["vectors"][4];
    assert_eq!(b5[0][0].as_f64().unwrap().to_bits(), r.to_bits());
    assert_eq!(b5[1][0].as_f64().unwrap().to_bits(), r.to_bits());
    assert_eq!(v["vectors"][1][0][0].as_f64(), Some(0.5));
    assert_eq!(v["vectors"][3][1][0].as_f64().unwrap().to_bits(), (-(3f64.sqrt())).to_bits());
}

#[test]
fn validate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let b = generate(d, &["paper-ex3-B"], "b.json");
    let rep = json(&incompat(&["validate", b.to_str().unwrap()], d));
    let f = &rep["frames"][0];
    assert_eq!(f["tight"], true);
    assert!((f["tight_constant"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(f["povm_residual"].as_f64().unwrap() < 1e-12);

    let a = generate(d, &["paper-expli-A"], "a.json");
    let rep = json(&incompat(&["validate", a.to_str().unwrap()], d));
    let f = &rep["frames"][0];
    assert_eq!(f["tight"], false);
    assert!((f["lower_bound"].as_f64().unwrap() - 9.0718).abs() < 1e-4);
    assert!((f["upper_bound"].as_f64().unwrap() - 22.9282).abs() < 1e-4);

    let p = generate(d, &["parseval", "2", "5"], "p.json");
    let rep = json(&incompat(&["validate", p.to_str().unwrap(), "--seed", "9"], d));
    assert_eq!(rep["frames"][0]["size"], 5);
    assert_eq!(rep["frames"][0]["tight"], true);

    let o = generate(d, &["orthonormal", "3"], "o.json");
    let rep = json(&incompat(&["validate", o.to_str().unwrap()], d));
    assert!((rep["frames"][0]["lower_bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((rep["frames"][0]["upper_bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("zero.json"), r#"{"label": "z", "dim": 2, "vectors": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}"#).unwrap();
    let out = incompat(&["validate", "zero.json"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid vector 1"));

    std::fs::write(d.join("bad.json"), "{\"label\": \"b\",\n\"dim\": 2,\n\"vectors\": [[[1, 0] [0, 1]]]}").unwrap();
    let out = incompat(&["validate", "bad.json"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    std::fs::write(d.join("line.json"), r#"{"label": "l", "dim": 2, "vectors": [[[1, 0], [0, 0]], [[2, 0], [0, 0]]]}"#).unwrap();
    assert_eq!(incompat(&["validate", "line.json"], d).status.code(), Some(2));

    assert_eq!(incompat(&["frobnicate"], d).status.code(), Some(1));
    assert_eq!(incompat(&["generate", "nonsense"], d).status.code(), Some(1));

    generate(d, &["identity", "2"], "id.json");
    assert_eq!(incompat(&["multi", "id.json", "id.json"], d).status.code(), Some(1));

    generate(d, &["parseval", "2", "13"], "big.json");
    let out = incompat(&["analyze", "big.json", "big.json"], d);
    assert_eq!(out.status.code(), Some(3));
    let out = incompat(&["validate", "big.json"], d);
    assert_eq!(out.status.code(), Some(0));

    generate(d, &["paper-expli-A"], "loose.json");
    let out = incompat(&["analyze", "id.json", "loose.json", "--gj", "S=5;T="], d);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, &["identity", "9"], "id9.json");
    assert_eq!(incompat(&["analyze", "id9.json", "id9.json"], d).status.code(), Some(3));
    let forced = Command::new(env!("CARGO_BIN_EXE_incompat"))
        .args(["analyze", "id9.json", "id9.json", "--trials", "4"])
        .current_dir(d)
        .env("INCOMPAT_BUDGET_OVERRIDE", "1")
        .output()
        .unwrap();
    assert_eq!(forced.status.code(), Some(0), "{}", String::from_utf8_lossy(&forced.stderr));
    assert_eq!(json(&forced)["meta"]["budget"]["force"], true);
}

#[test]
fn analyze_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, &["identity", "2"], "id2.json");
    let rep = json(&incompat(&["analyze", "id2.json", "id2.json"], d));
    assert_eq!(rep["pairwise"]["spark"], 2);
    assert_eq!(rep["pairwise"]["order"], 2);
    assert_eq!(rep["pairwise"]["t_min"], 2);

    generate(d, &["identity", "3"], "id3.json");
    generate(d, &["fourier", "3"], "f3.json");
    let out = incompat(&["analyze", "id3.json", "f3.json"], d);
    assert!(out.status.success());
    let rep = json(&out);
    assert_eq!(rep["pairwise"]["spark"], 4);
    assert_eq!(rep["pairwise"]["order"], 4);
    assert_eq!(rep["pairwise"]["t_min"], 2);
    assert_eq!(check(&rep, "reconstruction_identity")["pass"], true);
}

#[test]
fn report_schema_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, &["paper-ex3-A"], "a.json");
    generate(d, &["paper-ex3-B"], "b.json");
    let out = incompat(&["analyze", "a.json", "b.json", "--gj", "S=;T=0", "--gj", "S=0;T=0,1,2"], d);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let keys: Vec<usize> = ["\"meta\"", "\"frames\"", "\"pairwise\"", "\"constants\"", "\"gj\"", "\"multi\"", "\"checks\"", "\"discrepancies\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    let rep = json(&out);
    let meta = &rep["meta"];
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["tolerances"]["rel_rank_tol"], 1e-10);
    assert_eq!(meta["seed"], 0);
    assert_eq!(meta["budget"]["max_vectors"], 24);
    assert_eq!(rep["gj"].as_array().unwrap().len(), 2);
    assert_eq!(rep["gj"][1]["admissible"], false);
    assert_eq!(rep["discrepancies"].as_array().unwrap().len(), 0);
    for c in rep["checks"].as_array().unwrap() {
        assert!(c["name"].is_string() && c.get("expected").is_some() && c.get("computed").is_some());
        assert_eq!(c["pass"], true, "{c}");
    }

    let out = incompat(&["analyze", "a.json", "b.json", "--format", "text"], d);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS reconstruction_identity"));
    assert!(text.contains("t_min = 2"));
}

#[test]
fn identity_triple() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, &["identity", "2"], "id.json");
    let out = incompat(&["multi", "id.json", "id.json", "id.json"], d);
    assert!(out.status.success());
    let rep = json(&out);
    assert_eq!(rep["multi"]["order"], 3);
    assert_eq!(rep["multi"]["bound_lhs"], 3.0);
    assert_eq!(rep["multi"]["strict"], false);
    assert_eq!(rep["pairwise"]["matrix"], serde_json::json!([[0, 2, 2], [2, 0, 2], [2, 2, 0]]));
}
