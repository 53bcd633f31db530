use std::path::Path;
use std::process::{Command, Output};

fn spantri(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spantri"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPANTRI_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = spantri(dir.path(), &["construct", "--n", "14", "--k", "7", "--out", "t.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = spantri(dir.path(), &["verify", "--in", "t.json", "--suite", "nested", "--out", "r.json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 violations"));
}

#[test]
fn removed_edge_fails_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&spantri(dir.path(), &["construct", "--n", "14", "--k", "7", "--out", "t.json"])), 0);
    let path = dir.path().join("t.json");
    let mut t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rot = t["rotations"].as_object_mut().unwrap();
    let (a, b) = (7u64, rot["7"][0].as_u64().unwrap());
    for (v, w) in [(a, b), (b, a)] {
        rot.get_mut(&v.to_string()).unwrap().as_array_mut().unwrap().retain(|x| x.as_u64() != Some(w));
    }
    std::fs::write(&path, t.to_string()).unwrap();
    let out = spantri(dir.path(), &["verify", "--in", "t.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge-count"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&spantri(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&spantri(dir.path(), &["construct", "--n", "3", "--k", "5"])), 2);
    assert_eq!(code(&spantri(dir.path(), &["verify", "--in", "missing.json"])), 2);
    assert_eq!(code(&spantri(dir.path(), &["sweep", "--n-min", "5", "--n-max", "6"])), 2);
}

#[test]
fn exhausted_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&spantri(dir.path(), &["construct", "--n", "20", "--k", "5", "--out", "t.json"])), 0);
    let out = spantri(dir.path(), &["verify", "--in", "t.json", "--suite", "density", "--budget", "50"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    let out = Command::new(env!("CARGO_BIN_EXE_spantri"))
        .args(["fragments", "--in", "t.json", "--max-edges", "6"])
        .current_dir(dir.path())
        .env("SPANTRI_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn failed_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&spantri(dir.path(), &["lowerbound", "--n", "100", "--k", "50"])), 0);
    assert_eq!(code(&spantri(dir.path(), &["lowerbound", "--n", "30", "--k", "3"])), 1);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&spantri(d, &["construct", "--n", "12", "--k", "10", "--out", "k4.json"])), 0);
    assert_eq!(code(&spantri(d, &["construct", "--n", "7", "--k", "6", "--regime", "two-ring", "--out", "w.json"])), 0);
    let commands: Vec<Vec<&str>> = vec![
        vec!["construct", "--n", "14", "--k", "4"],
        vec!["verify", "--in", "k4.json", "--max-edges", "8"],
        vec!["verify", "--in", "k4.json", "--suite", "density", "--max-edges", "7", "--format", "csv"],
        vec!["fragments", "--in", "k4.json", "--max-edges", "5"],
        vec!["spread", "--in", "w.json", "--max-edges", "5"],
        vec!["spread", "--in", "w.json", "--mode", "spiro", "--q", "1/2", "--max-edges", "4"],
        vec!["simulate", "--n", "10", "--k", "6", "--p", "0.6", "--trials", "80", "--seed", "9"],
        vec!["threshold", "--n", "9", "--k", "5", "--trials", "60", "--tol", "0.05", "--seed", "9"],
        vec!["sweep", "--alpha", "0.5", "--n-min", "7", "--n-max", "9", "--trials", "40", "--tol", "0.05", "--format", "csv"],
        vec!["lowerbound", "--n", "200", "--k", "20"],
    ];
    for args in commands {
        let mut reports = Vec::new();
        for workers in ["1", "3"] {
            let mut full = args.clone();
            full.extend(["--workers", workers, "--out", "report.out"]);
            let out = spantri(d, &full);
            assert!(matches!(code(&out), 0 | 1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
            reports.push(std::fs::read(d.join("report.out")).unwrap());
        }
        assert_eq!(reports[0], reports[1], "{args:?}");
    }
}
