use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ugbound::exact::{value, Labeling};
use ugbound::instance;

fn ugbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ugbound")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn planted_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let ug = dir.path().join("p.ug");
    let lab = dir.path().join("p.lab");
    let o = ugbound(&["gen", "--type", "planted", "--n", "6", "--k", "3", "--m", "9", "--seed", "4", "--out", path(&ug), "--labels", path(&lab)]);
    assert!(o.status.success());

    let inst = instance::read(&fs::read_to_string(&ug).unwrap()).unwrap();
    let labels: Vec<usize> = fs::read_to_string(&lab)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse::<usize>().unwrap() - 1)
        .collect();
    assert_eq!(value(&inst, &Labeling::new(labels)).unwrap(), inst.total_weight());

    let o = ugbound(&["exact", path(&ug), "--format", "records"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "n=6 k=3 m=9 W=9.0000 z_exact=9.0000");

    let o = ugbound(&["bound", path(&ug), "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    for kv in ["z_exact=9.0000", "z1=9.0000", "lb=5.7296", "sound=true", "theorem2_holds=true", "converged=true"] {
        assert!(line.contains(kv), "{kv} missing from {line}");
    }
}

#[test]
fn expected_uniform_and_rounded() {
    let dir = tempfile::tempdir().unwrap();
    let ug = dir.path().join("p.ug");
    assert!(ugbound(&["gen", "--type", "planted", "--n", "6", "--k", "3", "--m", "9", "--seed", "4", "--out", path(&ug)]).status.success());
    let o = ugbound(&["expected", path(&ug), "--format", "records"]);
    assert!(o.status.success());
    // uniform labels match each edge with probability 1/k
    assert_eq!(stdout(&o).trim(), "n=6 k=3 m=9 W=9.0000 ez=3.0000 z_round=7.0000");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ug = dir.path().join("r.ug");
    assert!(ugbound(&["gen", "--type", "random", "--n", "6", "--k", "3", "--m", "5", "--out", path(&ug)]).status.success());

    let o = ugbound(&["exact", path(&ug), "--enum-limit", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("729"));

    assert_eq!(ugbound(&["exact", path(&dir.path().join("missing.ug"))]).status.code(), Some(2));
    assert_eq!(ugbound(&["sdp", path(&ug), "--tol", "0"]).status.code(), Some(1));
    assert_eq!(ugbound(&["frobnicate"]).status.code(), Some(1));

    fs::write(&ug, "UG 2\n2 2\n0\n").unwrap();
    assert_eq!(ugbound(&["exact", path(&ug)]).status.code(), Some(2));
}

#[test]
fn sdp_factors_are_unit_rows() {
    let dir = tempfile::tempdir().unwrap();
    let ug = dir.path().join("m.ug");
    let factors = dir.path().join("m.v");
    assert!(ugbound(&["gen", "--type", "maxcut", "--n", "5", "--m", "7", "--seed", "3", "--out", path(&ug)]).status.success());
    let o = ugbound(&["sdp", path(&ug), "--factors", path(&factors)]);
    assert_eq!(o.status.code(), Some(0));

    let text = fs::read_to_string(&factors).unwrap();
    let mut lines = text.lines();
    let header: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(header[0], 15);
    let mut rows = 0;
    for l in lines {
        let v: Vec<f64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_eq!(v.len(), header[1]);
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-6, "{norm}");
        rows += 1;
    }
    assert_eq!(rows, 15);
}
