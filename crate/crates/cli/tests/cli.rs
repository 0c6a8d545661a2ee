use std::path::Path;
use std::process::{Command, Output};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_passes_for_each_construction() {
    for c in ["naive", "linear", "walsh"] {
        let o = qwalk(&["verify", "--construction", c, "--n", "3", "--seed", "7"]);
        assert_eq!(o.status.code(), Some(0), "{c}: {}", stdout(&o));
        assert!(stdout(&o).contains("max deviation"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qwalk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qwalk(&["verify", "--construction", "naive", "--n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(qwalk(&["verify", "--construction", "quantum", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn dense_limit_comes_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["verify", "--construction", "naive", "--n", "3"])
        .env("QWALK_DENSE_LIMIT", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dense-limit-exceeded"));
}

#[test]
fn dirac_walk_csv_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("walk.csv");
    let json_path = dir.path().join("walk.json");
    let cfg = configs().join("dirac-trapping.json");
    let o = qwalk(&["walk", "--config", path(&cfg), "--out", path(&csv_path), "--out", path(&json_path)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let rows: Vec<(usize, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 64);
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() <= 1e-9);
    let window: f64 = rows.iter().filter(|r| r.0.abs_diff(32) <= 8).map(|r| r.1).sum();
    assert!(window >= 0.6, "{window}");
    let results: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(results["steps"], 30);
    assert!(results["tvd_vs_oracle"].as_f64().unwrap() < 1e-9);
}

#[test]
fn built_circuit_feeds_analyze_and_walk() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("coin.json");
    let qasm = dir.path().join("coin.qasm");
    let coin = configs().join("reference-coin.json");
    let o = qwalk(&["build", "--construction", "linear", "--coin", path(&coin), "--out", path(&circuit), "--qasm", path(&qasm)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&qasm).unwrap().starts_with("OPENQASM 2.0;"));

    let o = qwalk(&["analyze", "--circuit", path(&circuit)]);
    let text = stdout(&o);
    let depth: usize = text.lines().find_map(|l| l.strip_prefix("depth: ")).unwrap().parse().unwrap();
    assert!(depth <= 53);
    assert!(text.contains("predicted depth bound 20n+2δ-7: 53"));

    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"n":3,"coin":{"kind":"reference"},"builder":{"kind":"circuit","path":"coin.json"},"shift":"qft",
            "steps":6,"initial":{"kind":"basis","k":3,"coin":1}}"#,
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let o = qwalk(&["walk", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let results: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(results["tvd_vs_oracle"].as_f64().unwrap() < 1e-9);
}

#[test]
fn sampled_walks_are_deterministic_given_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("reference-walk.json");
    let read = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = qwalk(&["walk", "--config", path(&cfg), "--out", path(&out), "--seed", seed]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(read("a.csv", "5"), read("b.csv", "5"));
    assert_ne!(read("c.csv", "5"), read("d.csv", "6"));
}

#[test]
fn shift_and_scaling_commands() {
    let o = qwalk(&["shift", "--scheme", "qft", "--n", "3", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("predicted qft size: 22, depth: 9"));
    let o = qwalk(&["shift", "--scheme", "id", "--n", "4", "--verify"]);
    assert!(stdout(&o).contains("predicted id size: 20, depth: 18"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scaling.csv");
    let o = qwalk(&["scaling", "--construction", "walsh", "--n-range", "1..4", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,construction,qubits,"));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(qwalk(&["scaling", "--n-range", "4..2", "--out", path(&out)]).status.code(), Some(2));
}
