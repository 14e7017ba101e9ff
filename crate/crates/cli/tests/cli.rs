use std::process::{Command, Output};

const H: &str = "aBBa,abbAABA,ABaba";
const K: &str = "aaba,abbbbaaBBA";

fn stallings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stallings")).args(args).env_remove("STALLINGS_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_worked_pair() {
    let o = stallings(&["--json", "check", H, K]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank_meet"], 1);
    assert_eq!(v["rank_join"], 2);
    assert_eq!(v["chi_t"], -3);
    assert_eq!(v["verdicts"]["strong_burns"]["status"], "pass");
}

#[test]
fn check_text_table() {
    let o = stallings(&["check", H, K]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rank(H∩K)      1"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn corpus_passes() {
    let o = stallings(&["corpus"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("pass")));
}

#[test]
fn core_dot() {
    let o = stallings(&["core", "a", "bab", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("digraph \"core\""));
    assert_eq!(out.matches(" -> ").count(), 4);
}

#[test]
fn intersect_dot_labels_pairs() {
    let o = stallings(&["intersect", "a,bab", "b,aa", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("label=\"(0,0)\""), "{out}");
    assert!(out.starts_with("rank "));
}

#[test]
fn join_and_pushout() {
    let o = stallings(&["--json", "join", "a", "b"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);
    let o = stallings(&["--json", "pushout", H, K]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chi"], -3);
}

#[test]
fn matrix_of_trivial_meet_is_refused() {
    let o = stallings(&["matrix", "a", "b"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn matrix_self_pair() {
    let o = stallings(&["--json", "matrix", "a,bab", "a,bab"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entry_sum"], 2);
    assert_eq!(v["delta"]["edge_count"], 2);
}

#[test]
fn malformed_input_exits_one() {
    for args in [&["core", "a", "b@"][..], &["check", "a", "missing.json"], &["bogus"], &["fuzz", "--min-rank", "0"]] {
        let o = stallings(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(stallings(&["--help"]).status.code(), Some(0));
}

#[test]
fn fuzz_is_byte_identical() {
    let args = ["fuzz", "--seed", "9", "--count", "60"];
    let a = stallings(&args);
    let b = stallings(&args);
    let c = stallings(&[&args[..], &["--sequential"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 60);
}

#[test]
fn seed_from_environment() {
    let env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_stallings"))
            .args(["fuzz", "--seed", "1", "--count", "20"])
            .env("STALLINGS_SEED", seed)
            .output()
            .unwrap()
    };
    assert_eq!(env("9").stdout, stallings(&["fuzz", "--seed", "9", "--count", "20"]).stdout);
    assert_eq!(env("nine").status.code(), Some(1));
}

#[test]
fn spec_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    let k = dir.path().join("k.json");
    std::fs::write(&h, r#"{"alphabet_rank":2,"generators":["aBBa","abbAABA","ABaba"]}"#).unwrap();
    std::fs::write(&k, r#"{"alphabet_rank":2,"generators":["aaba","abbbbaaBBA"]}"#).unwrap();
    let from_files = stallings(&["--json", "check", h.to_str().unwrap(), k.to_str().unwrap()]);
    assert_eq!(from_files.status.code(), Some(0));
    assert_eq!(from_files.stdout, stallings(&["--json", "check", H, K]).stdout);
}

#[test]
fn rank_four_core() {
    let o = stallings(&["--json", "core", "--rank", "4", "ab", "cd", "x3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 3);
}
