use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_harmonic-influence");

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn generate_then_exact_mpa_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out) = run(&["generate", "--n", "30", "--p", "0.2", "--extra-edges", "3", "--seed", "4", "--out", d]);
    assert_eq!(code, 0);
    assert!(out.contains("st: 30 nodes, 29 edges"));
    assert!(out.contains("fe: 30 nodes, 32 edges"));

    let st = dir.path().join("st.edges");
    let st = st.to_str().unwrap();
    let (code, exact) = run(&["exact", st]);
    assert_eq!(code, 0);
    assert_eq!(exact.lines().count(), 31);

    let mpa_dir = dir.path().join("mpa");
    let (code, out) = run(&["mpa", st, "--out", mpa_dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("converged: true"));
    let est = fs::read_to_string(mpa_dir.join("estimates.csv")).unwrap();
    for (a, b) in exact.lines().zip(est.lines()).skip(1) {
        let a: f64 = a.split(',').nth(1).unwrap().parse().unwrap();
        let b: f64 = b.split(',').nth(1).unwrap().parse().unwrap();
        assert!((a - b).abs() < 1e-9 * a);
    }
    assert!(mpa_dir.join("trace.csv").exists());
    assert!(mpa_dir.join("messages.csv").exists());

    let er = dir.path().join("er.edges");
    let (code, out) = run(&["check", er.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "satisfied");
}

#[test]
fn non_convergence_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.edges");
    fs::write(&path, "0 1\n1 2\n0 2\n").unwrap();
    let (code, out) = run(&["mpa", path.to_str().unwrap(), "--max-iter", "3"]);
    assert_eq!(code, 2);
    assert!(out.starts_with("converged: false"));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.edges");
    fs::write(&path, "0 1\n1 x\n").unwrap();
    let out = Command::new(BIN).args(["exact", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.edges:2:"));

    let missing = dir.path().join("missing.edges");
    assert_eq!(run(&["exact", missing.to_str().unwrap()]).0, 1);
}

#[test]
fn experiment_writes_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out) = run(&["experiment", "--n", "20", "--p", "0.3", "--extra-edges", "2", "--seeds", "2", "--out", d]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
    assert!(dir.path().join("sweep.json").exists());
    assert!(dir.path().join("seed_1/fe_scatter_w.csv").exists());
}
