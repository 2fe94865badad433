use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn syzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzlab"))
        .args(args)
        .env_remove("SYZLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn small_table_diagram() {
    let o = syzlab(&["table", "-n", "1", "-b", "1", "-d", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "  | 0 1 2\n---------\n0 | 2 3 -\n1 | - - 1\n");
}

#[test]
fn single_cell() {
    let o = syzlab(&["kpq", "-n", "2", "-b", "0", "-d", "3", "-p", "7", "-q", "2"]);
    assert_eq!(stdout(&o), "1\n");
    let o = syzlab(&["kpq", "-n", "2", "-d", "3", "-p", "7", "-q", "2", "--field", "Q", "--format", "csv"]);
    assert_eq!(stdout(&o), "p,q,value,field,method\n7,2,1,Q,engine\n");
}

#[test]
fn certificate_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = syzlab(&["certify", "-n", "2", "-b", "0", "-d", "4", "-q", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&path).unwrap();
    let cert = syzlab_core::certificates::Certificate::from_json(&text).unwrap();
    assert_eq!(cert.p, 10);
    assert!(cert.is_valid());
    assert!(stdout(&o).contains("valid: yes"));
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &["table", "-n", "2", "-d", "3", "--format", "csv"][..],
        &["table", "-n", "2", "-d", "3", "--format", "json"][..],
        &["bs", "sample", "-r", "60", "-N", "50", "--format", "csv", "--seed", "9"][..],
        &["predict", "-n", "2", "-b", "1", "-d", "3", "--format", "json"][..],
    ] {
        assert_eq!(syzlab(args).stdout, syzlab(args).stdout, "{args:?}");
    }
    let a = syzlab(&["bs", "sample", "-r", "60", "-N", "50", "--format", "csv", "--seed", "9"]);
    let b = syzlab(&["bs", "sample", "-r", "60", "-N", "50", "--format", "csv", "--seed", "10"]);
    assert_ne!(a.stdout, b.stdout);
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn cache_resume_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cd = dir.path().to_str().unwrap();
    let fresh = syzlab(&["table", "-n", "2", "-d", "3", "--format", "csv"]);

    let partial = syzlab(&["table", "-n", "2", "-d", "3", "--format", "csv", "--cache-dir", cd, "--budget", "300"]);
    assert_eq!(partial.status.code(), Some(3));
    assert!(stderr(&partial).contains("budget exceeded"));
    let after_partial = cache_files(dir.path()).len();
    assert!(after_partial > 0);

    let resumed = syzlab(&["table", "-n", "2", "-d", "3", "--format", "csv", "--cache-dir", cd]);
    assert!(resumed.status.success());
    assert_eq!(resumed.stdout, fresh.stdout);
    let files = cache_files(dir.path());
    assert!(files.len() > after_partial);

    fs::write(&files[0], "garbage").unwrap();
    let again = Command::new(env!("CARGO_BIN_EXE_syzlab"))
        .args(["table", "-n", "2", "-d", "3", "--format", "csv"])
        .env("SYZLAB_CACHE", cd)
        .output()
        .unwrap();
    assert!(again.status.success());
    assert_eq!(again.stdout, fresh.stdout);
    assert!(stderr(&again).contains("corrupt cache record"));
    assert!(fs::read_to_string(&files[0]).unwrap().contains("engine_version"));
}

#[test]
fn exit_codes() {
    assert_eq!(syzlab(&["kpq", "-n", "1", "-d", "3", "-p", "1", "-q", "1", "--field", "4"]).status.code(), Some(2));
    assert_eq!(syzlab(&["kpq", "-n", "1", "-d", "3"]).status.code(), Some(2));
    assert_eq!(syzlab(&["certify", "-n", "2", "-b", "1", "-d", "3", "-q", "2"]).status.code(), Some(2));
    assert_eq!(syzlab(&["kpq", "-n", "2", "-d", "4", "-p", "5", "-q", "1", "--budget", "10"]).status.code(), Some(3));
    let o = syzlab(&["oracle", "-n", "1", "-b", "0", "-d", "4", "-p", "2", "-q", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("agree"));
}

#[test]
fn selftest_subset() {
    let o = syzlab(&["selftest", "--only", "1,4,9"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.contains("PASS")));
}

#[test]
fn decompose_engine_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let t = syzlab(&["table", "-n", "1", "-b", "-1", "-d", "6", "--format", "csv"]);
    fs::write(&path, &t.stdout).unwrap();
    let o = syzlab(&["bs", "decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "6 Pi_6\n");
    let o = syzlab(&["bs", "synthesize", "-r", "2", "--coeffs", "0,1,0,0"]);
    assert_eq!(stdout(&o), "  | 0 1 2\n---------\n1 | 1 - -\n2 | - 3 2\n");
}

#[test]
fn formulas() {
    let o = syzlab(&["range", "veronese", "-n", "2", "-d", "3", "-q", "2"]);
    assert_eq!(stdout(&o), "K_{p,2}(2,0;3) != 0: 7 <= p <= 7\n");
    let o = syzlab(&["range", "threshold", "--family", "veronese", "-n", "2", "-d", "3", "-k", "7"]);
    assert!(stdout(&o).starts_with("(N_7) fails"));
    let o = syzlab(&["curve", "kp1", "-g", "0", "-d", "3"]);
    assert_eq!(stdout(&o), "k_{1,1} = 3\nk_{2,1} = 2\nk_{3,1} = 0\n");
    let o = syzlab(&["curve", "gaussian", "-g", "0", "-d", "80", "-a", "0"]);
    assert!(stdout(&o).starts_with("0.97"));
    let o = syzlab(&["predict", "-n", "2", "-d", "3"]);
    assert!(stdout(&o).contains("nonzero"));
}
