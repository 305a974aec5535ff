use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn symconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symconf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn singer_ruler_line() {
    let o = symconf(&["construct", "singer", "--q", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "mgr 31 6: 0,1,8,11,13,17");
}

#[test]
fn dense_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pg.txt");
    let o = symconf(&["construct", "singer", "--q", "4", "--format", "dense", "--out", path(&f)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = symconf(&["verify", "--in", path(&f)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "v=21 k=5 deficiency=0 girth=6");
}

#[test]
fn fano_reports_girth_six() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fano.txt");
    fs::write(&f, "7 3\n1101000\n0110100\n0011010\n0001101\n1000110\n0100011\n1010001\n").unwrap();
    let o = symconf(&["verify", "--in", path(&f)]);
    assert_eq!(stdout(&o).trim(), "v=7 k=3 deficiency=0 girth=6");
}

#[test]
fn verify_rejects_rectangle() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    fs::write(&f, "4 2\n1100\n1100\n0011\n0011\n").unwrap();
    let o = symconf(&["verify", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn exhaustive_search_reports_absence() {
    let o = symconf(&["ruler", "search", "--v", "34", "--k", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "not found (exhaustive)");
}

#[test]
fn tiny_budget_is_inconclusive() {
    let o = symconf(&["ruler", "search", "--v", "48", "--k", "7", "--budget", "3"]);
    assert_eq!(stdout(&o).trim(), "unknown (budget exceeded)");
}

#[test]
fn transform_and_stretch() {
    let o = symconf(&["ruler", "transform", "--marks", "0,1,4,10,12,17", "--v", "31", "--m", "19"]);
    assert_eq!(stdout(&o).trim(), "mgr 31 6: 0,4,11,13,14,19");
    let o = symconf(&["ruler", "stretch", "--marks", "0,4,11,13,14,19", "--v", "31", "--delta-max", "4"]);
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn ruler_check_rejects_repeated_difference() {
    let o = symconf(&["ruler", "check", "--marks", "0,1,2", "--v", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn alist_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dense = dir.path().join("b.txt");
    let alist = dir.path().join("b.alist");
    let back = dir.path().join("back.txt");
    assert!(symconf(&["construct", "bose", "--q", "5", "--format", "dense", "--out", path(&dense)]).status.success());
    assert!(symconf(&["export", "--in", path(&dense), "--format", "alist", "--out", path(&alist)]).status.success());
    assert!(symconf(&["export", "--in", path(&alist), "--format", "dense", "--out", path(&back)]).status.success());
    assert_eq!(fs::read_to_string(&dense).unwrap(), fs::read_to_string(&back).unwrap());
}

#[test]
fn split_then_extend() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("b4.txt");
    let b = dir.path().join("b4.bdc");
    let m = dir.path().join("ext.txt");
    fs::write(&c, stdout(&symconf(&["construct", "bose", "--q", "4"]))).unwrap();
    assert!(symconf(&["bdc", "split", "--in", path(&c), "--t", "5", "--out", path(&b)]).status.success());
    let o = symconf(&["extend", "--in", path(&b), "--theta", "5", "--out", path(&m)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = symconf(&["verify", "--in", path(&m)]);
    assert_eq!(stdout(&o).trim(), "v=20 k=4 deficiency=7 girth=6");
}

#[test]
fn non_prime_power_is_domain_error() {
    let o = symconf(&["construct", "singer", "--q", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: NotPrimePower:"));
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(symconf(&["construct", "hadamard"]).status.code(), Some(2));
    assert_eq!(symconf(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_io_error() {
    let o = symconf(&["verify", "--in", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: Io:"));
}

#[test]
fn spectrum_text_and_json() {
    let o = symconf(&["spectrum", "--k", "6", "--effort", "search"]);
    let text = stdout(&o);
    assert!(text.starts_with("k=6 P=31 G=35"));
    assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["34", "no-cyclic"])));

    let o = symconf(&["spectrum", "--k", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["P"], 21);
    assert_eq!(v["G"], 23);
    assert_eq!(v["verdicts"][0]["status"], "exists_cyclic");
}
