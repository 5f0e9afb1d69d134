use std::fs;
use std::process::{Command, Output};

fn pi01(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pi01"))
        .args(args)
        .env_remove("PI01_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dmr_scan_small_range() {
    let o = pi01(&[
        "dmr",
        "scan",
        "--from",
        "1",
        "--to",
        "100",
        "--variant",
        "classic36",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["holds"], 100);
    assert_eq!(v["records"].as_array().unwrap().len(), 100);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["dmr", "scan", "--from", "1", "--to", "0"][..],
        &[
            "dmr",
            "scan",
            "--from",
            "1",
            "--to",
            "5",
            "--variant",
            "nope",
        ],
        &["dmr", "scan", "--from", "1", "--to", "5", "--bogus"],
        &["dmr", "scan", "--from", "1", "--to", "5", "--growth", "1"],
        &["eh", "schoenfeld", "--x", "100"],
        &["dioph", "eval", "--poly", "(+ x", "--at", "x=1"],
        &["frobnicate"],
    ] {
        let o = pi01(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(pi01(&["--help"]).status.code(), Some(0));
}

#[test]
fn worker_override_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_pi01"))
        .args(["dmr", "scan", "--from", "1", "--to", "5"])
        .env("PI01_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_pi01"))
        .args(["dmr", "scan", "--from", "1", "--to", "5"])
        .env("PI01_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn explog_and_dioph_commands() {
    let o = pi01(&["explog", "--a", "7", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness x=4"));
    let o = pi01(&["mat", "explog", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("min_too_large"));
    assert_eq!(
        stdout(&pi01(&["dioph", "pell", "--a", "2", "--n", "4"])).trim(),
        "chi=97 psi=56"
    );
    assert_eq!(
        stdout(&pi01(&["dioph", "theta1", "--k", "4"])).trim(),
        "0.0203000500000007"
    );
    assert_eq!(
        stdout(&pi01(&["dioph", "theta1", "--k", "6", "--extract", "5"])).trim(),
        "11"
    );
    let o = pi01(&[
        "dioph",
        "eval",
        "--poly",
        "(- (^ x 2) (* 3 (^ y 2)) 1)",
        "--at",
        "x=7",
        "--at",
        "y=4",
    ]);
    assert_eq!(stdout(&o).trim(), "0");
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.txt");
    fs::write(&sys, "(- x 1)\n(- y 2)\n").unwrap();
    let o = pi01(&["dioph", "combine", "--input", sys.to_str().unwrap()]);
    assert_eq!(
        stdout(&o).trim(),
        "(+ (* 1 (^ x 2)) (* 1 (^ y 2)) (* -2 (^ x 1)) (* -4 (^ y 1)) (* 5))"
    );
}

#[test]
fn eh_csv_headers() {
    let o = pi01(&[
        "eh", "record", "--x", "1000", "--q", "12", "--format", "csv",
    ]);
    let s = stdout(&o);
    let mut l = s.lines();
    assert_eq!(
        l.next(),
        Some("x,q,a,pi_qa,li_over_phi_lo,li_over_phi_hi,e_lo,e_hi")
    );
    assert_eq!(l.count(), 4);
    let o = pi01(&[
        "eh",
        "ehsum",
        "--x",
        "10000",
        "--eps",
        "0.5",
        "--format",
        "csv",
        "--workers",
        "2",
    ]);
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("x,Q,regime,A,B,eps,sum_lo,sum_hi"));
    assert!(s.lines().nth(1).unwrap().starts_with("10000,100,EH,,,0.5,"));
    assert_eq!(stdout(&pi01(&["eh", "gaps", "--x", "100"])).trim(), "24");
}

#[test]
fn resume_with_altered_variant_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("c.jsonl");
    let cp = cp.to_str().unwrap();
    let base = [
        "dmr",
        "scan",
        "--from",
        "1",
        "--to",
        "40",
        "--checkpoint",
        cp,
    ];
    assert_eq!(pi01(&base).status.code(), Some(0));
    let o = pi01(&[&base[..], &["--variant", "rational25"]].concat());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("different run configuration"));
}

#[test]
fn selftest_passes() {
    let o = pi01(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
