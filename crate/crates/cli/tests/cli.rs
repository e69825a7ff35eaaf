use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftpair"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn coeffs_csv_has_comment_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["coeffs", "--form", "delta", "--n-max", "50"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("coeffs.csv")).unwrap();
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# config_hash=") && comment.contains("version="), "{comment}");
    assert!(lines.next().unwrap().contains(','));
    assert_eq!(lines.count(), 50);
}

#[test]
fn reruns_are_byte_identical_across_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["pair-correlation", "--synthetic", "300", "--T", "150", "--lambda", "1", "--seed", "4"];
    let oa = run(&[&args[..], &["--threads", "1"]].concat(), a.path());
    let ob = run(&[&args[..], &["--threads", "8"]].concat(), b.path());
    assert_eq!(code(&oa), 0, "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(code(&ob), 0);
    for name in ["pair_correlation.csv", "pair_correlation.svg"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn seed_changes_synthetic_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["double-sum", "--synthetic", "50", "--T", "40", "--x", "3,5"];
    assert_eq!(code(&run(&[&args[..], &["--seed", "1"]].concat(), a.path())), 0);
    assert_eq!(code(&run(&[&args[..], &["--seed", "2"]].concat(), b.path())), 0);
    let read = |d: &Path| std::fs::read_to_string(d.join("double_sum.csv")).unwrap();
    assert_ne!(read(a.path()), read(b.path()));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[grid]\nunknown_key = 1\n").unwrap();
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap(), "predict", "--lambda", "1", "--T", "100"], dir.path())), 2);
    assert_eq!(code(&run(&["coeffs", "--form", "no.such.form"], dir.path())), 2);
    assert_eq!(code(&run(&["double-sum", "--synthetic", "20", "--x", "a,b"], dir.path())), 2);
}

#[test]
fn lg_compare_marks_integer_x() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["lg-compare", "--synthetic", "20", "--T", "30", "--x", "3,3.4"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("lg_compare.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert!(rows[0].ends_with("NaN"), "{}", rows[0]);
    assert!(!rows[1].ends_with("NaN"), "{}", rows[1]);
}

#[test]
fn data_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.zeros");
    let o = run(&["double-sum", "--zeros", missing.to_str().unwrap(), "--x", "3"], dir.path());
    assert_eq!(code(&o), 3);
    let bad = dir.path().join("bad.zeros");
    std::fs::write(&bad, "not a zero file\n").unwrap();
    assert_eq!(code(&run(&["double-sum", "--zeros", bad.to_str().unwrap(), "--x", "3"], dir.path())), 3);
}

#[test]
fn pair_budget_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["double-sum", "--synthetic", "100", "--T", "50", "--x", "3", "--pair-budget", "1000"], dir.path());
    assert_eq!(code(&o), 4);
}

#[test]
fn predict_writes_both_conventions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["predict", "--lambda", "1", "--T", "5000", "--alpha-grid", "0.1:0.5:0.1"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("predict.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("alpha,prediction_paper,prediction_derivation"));
    assert_eq!(text.lines().count(), 7);
}
