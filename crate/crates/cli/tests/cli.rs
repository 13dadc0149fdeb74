use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", &format!("{name}.r1")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn r1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_r1")).args(args).output().expect("run r1")
}

fn stdout(args: &[&str]) -> String {
    let out = r1(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn rho_lines() {
    let out = stdout(&["rho", "--word", &corpus("chacon"), "--stage", "4"]);
    assert_eq!(out, "rho_0=0\nrho_1=1/3\nrho_2=4/9\nrho_3=13/27\nrho_4=40/81\nlimit=1/2\n");
}

#[test]
fn code_orbit() {
    assert_eq!(stdout(&["code", "--word", &corpus("chacon"), "--stage", "1", "--steps", "4"]), "0010\n");
    let out = r1(&["code", "--word", &corpus("chacon"), "--stage", "1", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("OrbitEscaped"));
}

#[test]
fn identical_words_have_unresolved_distance() {
    let c = corpus("chacon");
    let out = r1(&["dist", "--a", &c, "--b", &c]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("IdenticalPrefixUnresolved"));
    assert_eq!(stdout(&["dist", "--a", &c, "--b", &corpus("random_3")]), "distance=1/8192\n");
}

#[test]
fn tower_table_and_csv() {
    let c = corpus("chacon");
    let text = stdout(&["tower", "--word", &c, "--stage", "1"]);
    assert_eq!(
        text,
        "level_index left right label image_offset\n0 0 2/9 0 2/9\n1 2/9 4/9 0 4/9\n2 2/3 8/9 1 -2/9\n3 4/9 2/3 0 -\n"
    );
    let csv = stdout(&["tower", "--word", &c, "--stage", "1", "--base", "3/5", "--csv"]);
    assert_eq!(csv.lines().next(), Some("level_index,left,right,label,image_offset"));
    assert_eq!(csv.lines().nth(3), Some("2,3/5,4/5,1,-1/5"));
    assert!(!csv.contains('\r'));
}

#[test]
fn csv_quotes_multiline_fields() {
    let out = stdout(&["scheme", "--a", &corpus("chacon"), "--v", "0010", "--w", "0110", "--stage", "1", "--csv"]);
    assert!(out.starts_with("presentation\n\"R1WORD 1\n"));
}

#[test]
fn scheme_apply_and_check() {
    let c = corpus("chacon");
    let applied = stdout(&["scheme", "--a", &c, "--v", "0010", "--w", "0110", "--stage", "1"]);
    let dir = std::env::temp_dir().join(format!("r1-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let w = dir.join("w.r1");
    std::fs::write(&w, &applied).unwrap();
    let w = w.to_string_lossy().into_owned();
    assert_eq!(stdout(&["expand", "--word", &w, "--stage", "1"]), "0110\n");
    let check = stdout(&["scheme", "--a", &c, "--b", &w, "--v", "0010", "--w", "0110", "--depth", "2"]);
    assert_eq!(check, "agrees=true compared=8 certified_infinite=true\n");
}

#[test]
fn densify_reports_plan() {
    let dir = std::env::temp_dir().join(format!("r1-densify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v = dir.join("v.r1");
    std::fs::write(&v, "R1WORD 1\nstem 0\nstage 2 2\nstage 3 1 2\ntail periodic 1\n").unwrap();
    let out = stdout(&[
        "densify",
        "--u",
        &corpus("chacon"),
        "--v",
        &v.to_string_lossy(),
        "--eps",
        "1/16",
        "--constraint",
        "1:1/6",
    ]);
    assert!(out.contains("n0=2\n"));
    assert!(out.contains("distance=1/8192\n"));
    assert!(out.contains("R1WORD 1\n"));
}

#[test]
fn measures_and_windows() {
    let c = corpus("chacon");
    assert!(stdout(&["measure", "--word", &c, "--alpha", "0"]).starts_with("mu=2/3 mu0=1\n"));
    assert!(stdout(&["measure", "--word", &c, "--alpha", "00", "--position", "-3"]).starts_with("mu=1/3 mu0=1/2\n"));
    assert_eq!(stdout(&["windows", "--word", &c, "--length", "2", "--stage", "3"]), "00\n01\n10\nstabilized=true\n");
    let out = r1(&["windows", "--word", &c, "--length", "14", "--stage", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn neighborhoods() {
    let c = corpus("chacon");
    assert_eq!(stdout(&["nbhd", "--word", &c, "--n", "1", "--r", "1/7"]), "O(1, 1/7) member=false\n");
    assert_eq!(stdout(&["ell", "--word", &c, "--v", "0010"]), "L=1/9\n");
    let out = r1(&["nbhd", "--word", &c, "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weak_distance_and_summability() {
    let c = corpus("chacon");
    let same = stdout(&["weakdist", "--word", &c, "--stage", "2", "--levels", "1,4,7"]);
    assert!(same.ends_with("lower=0 upper=0\n"));
    let out = stdout(&["summable", "--word", &c]);
    assert!(out.starts_with("term_0=1/4 sum_0=1/4\nterm_1=1/13 sum_1=17/52\n"));
    assert!(out.ends_with("converges=true bound=1/2\n"));
    let finite = stdout(&["summable", "--word", &corpus("simple_chain")]);
    assert!(finite.ends_with("converges=none bound=none\n"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(r1(&["expand", "--word", "/nonexistent.r1", "--stage", "1"]).status.code(), Some(2));
    assert_eq!(r1(&["expand", "--stage", "1"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("r1-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.r1");
    std::fs::write(&bad, "R1WORD 1\nstem 01\ntail none\n").unwrap();
    let out = r1(&["expand", "--word", &bad.to_string_lossy(), "--stage", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(r1(&["ell", "--word", &corpus("chacon"), "--v", "01"]).status.code(), Some(2));
    assert_eq!(r1(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["canon", "--word", &corpus("random_5"), "--stage", "3", "--csv"];
    assert_eq!(r1(&args).stdout, r1(&args).stdout);
}

#[test]
fn verify_all_passes() {
    let out = stdout(&["verify", "--suite", "all"]);
    assert!(out.ends_with("passed=73 failed=0\n"), "{out}");
}
