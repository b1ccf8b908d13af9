use std::path::Path;
use std::process::Command;

use herglotz::harness::{execute, run, ExperimentConfig, ExperimentKind};
use serde_json::{json, Value};

fn small(kind: ExperimentKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::for_kind(kind);
    c.seed = 9;
    match kind {
        ExperimentKind::Schur => c.count = 10,
        ExperimentKind::Phase => c.grid = 64,
        ExperimentKind::Superres => {
            c.grid = 64;
            c.sup_grid = 16;
            c.points = 1 << 12;
            c.schedule = Some(vec![0.25, 0.125, 0.0625]);
        }
        ExperimentKind::Lambda => c.points = 1 << 14,
        ExperimentKind::Ball => c.count = 9,
        ExperimentKind::Demo => c.sup_grid = 12,
    }
    c
}

const KINDS: [ExperimentKind; 6] = [
    ExperimentKind::Schur,
    ExperimentKind::Phase,
    ExperimentKind::Superres,
    ExperimentKind::Lambda,
    ExperimentKind::Ball,
    ExperimentKind::Demo,
];

#[test]
fn every_kind_reproduces_its_csv() {
    for kind in KINDS {
        let cfg = small(kind);
        let (a, b) = (execute(&cfg).unwrap(), execute(&cfg).unwrap());
        assert_eq!(a.table.to_csv().unwrap(), b.table.to_csv().unwrap(), "{kind:?}");
        assert_eq!(a.summary, b.summary, "{kind:?}");
        assert!(!a.table.rows.is_empty());
    }
}

#[test]
fn written_artifacts_match_across_runs() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for kind in KINDS {
        let mut cfg = small(kind);
        cfg.out = d1.path().to_path_buf();
        let m1 = run(&cfg).unwrap();
        cfg.out = d2.path().to_path_buf();
        let m2 = run(&cfg).unwrap();
        assert_eq!(m1.artifacts, m2.artifacts);
        assert_ne!(m1.config_hash, m2.config_hash, "the output directory is part of the config");
        for a in m1.artifacts.iter().filter(|a| !a.ends_with("_manifest.json")) {
            let x = std::fs::read(d1.path().join(a)).unwrap();
            let y = std::fs::read(d2.path().join(a)).unwrap();
            assert!(x == y, "{a} differs");
        }
        assert_eq!(m1.rows, m2.rows);
    }
}

#[test]
fn rows_carry_operation_and_tolerances() {
    let out = execute(&small(ExperimentKind::Ball)).unwrap();
    assert_eq!(out.rows.len(), out.table.rows.len());
    for r in &out.rows {
        assert_eq!(r.operation, "verify_ball_bound");
        assert!(r.tolerances.contains_key("slack_tol"));
    }
}

fn cli(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_herglotz")).args(args).current_dir(dir).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn write_config(dir: &Path, v: Value) -> String {
    let p = dir.join("cfg.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, out, _) = cli(&["schur", "--out", "o"], d);
    assert_eq!(code, 0);
    assert!(out.contains("schur.csv"));

    let (code, _, err) = cli(&["demo", "--out", "o", "--config", &write_config(d, json!({"sup_grid": 12}))], d);
    assert_eq!(code, 3, "{err}");

    let (code, out, _) = cli(&["validate", "--config", &write_config(d, json!({"kind": "phase", "grid": 1000}))], d);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "grid: 1000 is not a power of two");

    let (code, _, err) = cli(&["lambda", "--config", &write_config(d, json!({"gird": 8}))], d);
    assert_eq!(code, 1);
    assert!(err.contains("gird"), "{err}");

    // z -> z/2 maps the ball into itself but is not an automorphism.
    let half = json!({"A": [[[0, 0], [0, 0]], [[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]], "b": [[1, 0], [0, 0], [0, 0]]});
    let (code, _, err) = cli(&["ball", "--out", "o", "--config", &write_config(d, json!({"source": half}))], d);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("not a ball automorphism"), "{err}");
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write_config(d, json!({"kind": "demo", "seed": 5, "points": 4096, "out": "from_file"}));
    let (code, _, err) = cli(&["lambda", "--config", &cfg, "--seed", "7", "--out", "flag"], d);
    assert_eq!(code, 0, "{err}");
    let summary: Value = serde_json::from_slice(&std::fs::read(d.join("flag/lambda_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["points"], 4096);
    assert!(!d.join("from_file").exists());
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write_config(d, json!({"count": 9, "grid": 64}));
    for kind in ["ball", "phase"] {
        let (c1, _, _) = cli(&[kind, "--config", &cfg, "--threads", "1", "--out", "one"], d);
        let (c2, _, _) = cli(&[kind, "--config", &cfg, "--threads", "4", "--out", "four"], d);
        assert_eq!((c1, c2), (0, 0));
        let file = format!("{kind}.csv");
        assert_eq!(
            std::fs::read(d.join("one").join(&file)).unwrap(),
            std::fs::read(d.join("four").join(&file)).unwrap()
        );
    }
}
