use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn quasilr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasilr")).args(args).output().expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn validate_exit_codes() {
    let ok = quasilr(&["validate", "--scheme", &fixture("fibonacci.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["valid"], true);

    let bad = quasilr(&["validate", "--scheme", &fixture("invalid/rational_slope.json")]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json_of(&bad);
    assert_eq!(v["internal_dense"], false);
    assert!(v["failures"].as_array().unwrap().iter().any(|f| f.as_str().unwrap().contains("dense")));

    let broken = quasilr(&["validate", "--scheme", &fixture("invalid/malformed.json")]);
    assert_eq!(broken.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&broken.stderr);
    assert!(msg.contains("line 3 column"), "{msg}");

    let missing = quasilr(&["validate", "--scheme", "/nonexistent/scheme.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn invalid_scheme_is_refused_by_analysis_commands() {
    let o = quasilr(&["analyze", "--scheme", &fixture("invalid/rational_slope.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn analyze_reports() {
    let ab = json_of(&quasilr(&["analyze", "--scheme", &fixture("ammann_beenker.json")]));
    assert_eq!(ab["alpha"], 2);
    assert_eq!(ab["C"], true);
    assert_eq!(ab["homogeneity"], "homogeneous");
    assert_eq!(ab["decomposition"], "indecomposable");

    let dec = json_of(&quasilr(&["analyze", "--scheme", &fixture("decorated_ammann_beenker.json")]));
    assert_eq!(dec["alpha"], 2);
    assert_eq!(dec["C"], true);
    assert_eq!(dec["stabilisers"].as_array().unwrap().len(), 8);

    let rect = json_of(&quasilr(&["analyze", "--scheme", &fixture("rectangle.json")]));
    assert_eq!(rect["decomposition"]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn diophantine_dispatch() {
    let fib = json_of(&quasilr(&["diophantine", "--scheme", &fixture("fibonacci.json")]));
    assert_eq!(fib["lr"], "LR: certified-consistent");
    assert_eq!(fib["D"]["verdict"], "certified");

    let liou = json_of(&quasilr(&["diophantine", "--scheme", &fixture("liouville.json")]));
    assert_eq!(liou["D"]["verdict"], "empirically-failing");
    assert_eq!(liou["lr"], "LR: fails (D necessary)");

    let inh = json_of(&quasilr(&["diophantine", "--scheme", &fixture("fibonacci_inhomogeneous.json")]));
    assert_eq!(inh["dispatch"], "D_F");
    assert_eq!(inh["D_F"]["scale_n"], 1);
    assert!(inh["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("N = 1")));

    let non_c = json_of(&quasilr(&["diophantine", "--scheme", &fixture("non_c_square.json")]));
    assert_eq!(non_c["lr"], "LR: fails (C fails, exact)");
}

#[test]
fn diophantine_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = quasilr(&["diophantine", "--scheme", &fixture("fibonacci.json"), "--schedule", "2^4..2^10", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("D_factor0.csv")).unwrap();
    assert!(csv.starts_with("R,target_index,c_R,c_shell,dirichlet,w1,w2\n"));
    assert_eq!(csv.lines().count(), 1 + 7);
}

#[test]
fn generate_unlabelled_points() {
    let o = quasilr(&["generate", "--scheme", &fixture("ammann_beenker.json"), "--box", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,label,g1,g2,g3,g4"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 1000);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("")));
}

#[test]
fn generate_rejects_bad_box() {
    let o = quasilr(&["generate", "--scheme", &fixture("fibonacci.json"), "--box", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

fn column(csv: &str, i: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
fn empirics_sweep_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = quasilr(&["empirics", "--scheme", &fixture("fibonacci.json"), "--radii", "2,4,8,16", "--box", "200", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    let up = |v: Vec<f64>| v.windows(2).all(|w| w[0] <= w[1]);
    assert!(up(column(&read("complexity.csv"), 1)));
    assert!(up(column(&read("repetitivity.csv"), 1)));
    assert!(up(column(&read("cutregions.csv"), 1)));
    assert!(read("points.csv").starts_with("x1,label,g1,g2\n"));
}

#[test]
fn empirics_on_cyclic_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = quasilr(&["empirics", "--scheme", &fixture("penrose.json"), "--radii", "1,2", "--box", "12", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["points.csv", "complexity.csv", "repetitivity.csv", "cutregions.csv"] {
        let body = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(body.lines().count() >= 3, "{f}");
    }
}

#[test]
fn empirics_rejects_small_box() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = quasilr(&["empirics", "--scheme", &fixture("fibonacci.json"), "--radii", "2,4,8", "--box", "20", "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empirics_rejects_unordered_radii() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = quasilr(&["empirics", "--scheme", &fixture("fibonacci.json"), "--radii", "4,2", "--box", "100", "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
}
