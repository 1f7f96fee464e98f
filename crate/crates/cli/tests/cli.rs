use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn condavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condavg"))
        .args(args)
        .env_remove("CONDAVG_BUDGET")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// 5-cycle, both directions
const CYCLE: &str = r#"{"n": 5, "edges": [[0,1],[1,0],[1,2],[2,1],[2,3],[3,2],[3,4],[4,3],[4,0],[0,4]]}"#;

#[test]
fn params_reports_alphas() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", CYCLE);
    let c = write(dir.path(), "c.json", r#"{"kind": "full", "n": 5}"#);
    let out = condavg(&["params", "--graph", s(&g), "--class", s(&c)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["alpha"]["value"], 2);
    assert_eq!(v["alpha1"]["value"], 2);
    assert_eq!(v["alpha2"]["value"], 2);
}

#[test]
fn params_budget_exhaustion_exits_3() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", CYCLE);
    let c = write(dir.path(), "c.json", r#"{"kind": "full", "n": 5}"#);
    let out = condavg(&["params", "--graph", s(&g), "--class", s(&c), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_graph_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", "{\"n\": 3,\n \"edges\": [\n[0, 1],\n[2, 2]\n]}");
    let c = write(dir.path(), "c.json", r#"{"kind": "full", "n": 3}"#);
    let out = condavg(&["params", "--graph", s(&g), "--class", s(&c)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn learn_reports_risk() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", CYCLE);
    let c = write(dir.path(), "c.json", r#"{"kind": "thresholds", "n": 5}"#);
    let d = write(dir.path(), "d.json", r#"{"weights": [0.2, 0.2, 0.2, 0.2, 0.2]}"#);
    for extra in [&[][..], &["--amplify", "0.5"][..], &["--erm"][..]] {
        let mut args = vec!["learn", "--graph", s(&g), "--class", s(&c), "--dist", s(&d)];
        args.extend(["--concept-index", "2", "--m", "40", "--predictions"]);
        args.extend(extra);
        let out = condavg(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        let risk = v["risk"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&risk));
        assert_eq!(v["predictions"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn sweep_is_reproducible_and_validated() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "exp.json",
        r#"{"instance": {"kind": "star", "leaves": 6}, "class": {"kind": "full"},
            "concept": {"kind": "random"}, "distribution": {"kind": "uniform"},
            "m_grid": [2, 8, 32], "trials": 5, "base_seed": 3, "mode": {"kind": "algorithm1"}}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let plot = dir.path().join("a.dat");
    let out = condavg(&[
        "sweep",
        "--config",
        s(&cfg),
        "--out",
        s(&a),
        "--plot",
        s(&plot),
        "--workers",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = condavg(&["sweep", "--config", s(&cfg), "--out", s(&b), "--workers", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("family,n,m,trial,seed,mode,risk,alpha,alpha1,alpha2,runtime_ms\n"));
    assert_eq!(text.lines().count(), 1 + 15);
    let plot = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(
        plot.lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('m'))
            .count(),
        3
    );

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"instance": {"kind": "star", "leaves": 6}, "class": {"kind": "full"},
            "concept": {"kind": "random"}, "distribution": {"kind": "uniform"},
            "m_grid": [8, 2], "trials": 5, "base_seed": 3, "mode": {"kind": "algorithm1"}}"#,
    );
    let c = dir.path().join("c.csv");
    let out = condavg(&["sweep", "--config", s(&bad), "--out", s(&c)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!c.exists());
}

#[test]
fn oig_prints_orientation() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", r#"{"patterns": [[0,0],[0,1],[1,0],[1,1]]}"#);
    let out = condavg(&["oig", "--patterns", s(&p)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["max_out_degree"], 1);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn hardinstance_families() {
    let dir = TempDir::new().unwrap();
    let star = r#"{"n": 5, "edges": [[0,1],[0,2],[0,3],[0,4],[1,0],[2,0],[3,0],[4,0]]}"#;
    let g = write(dir.path(), "g.json", star);
    let single = write(dir.path(), "c.json", r#"{"kind": "singleton", "labels": [1,0,0,0,0]}"#);
    let out_path = dir.path().join("inst.json");
    let out = condavg(&[
        "hardinstance",
        "--graph",
        s(&g),
        "--class",
        s(&single),
        "--family",
        "bichromatic",
        "--eps",
        "0.05",
        "--seed",
        "4",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["family"], "bichromatic");
    assert_eq!(v["instance"]["a_prime"].as_array().unwrap().len(), 4);
    let total: f64 = v["distribution"]["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);

    let full = write(dir.path(), "full.json", r#"{"kind": "full", "n": 5}"#);
    let out = condavg(&[
        "hardinstance",
        "--graph",
        s(&g),
        "--class",
        s(&full),
        "--family",
        "shattered",
        "--eps",
        "0.1",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    // a singleton class shatters nothing
    let out = condavg(&[
        "hardinstance",
        "--graph",
        s(&g),
        "--class",
        s(&single),
        "--family",
        "shattered",
        "--eps",
        "0.1",
        "--out",
        s(&out_path),
    ]);
    assert_ne!(out.status.code(), Some(0));
}
