use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).expect("json report");
    (o.status.code().unwrap(), v)
}

#[test]
fn mutate_twice_returns_input() {
    let (code, v) = json(&["mutate", "--feed", "a2", "--word", "m1 m1"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["returns_to_input"], true);
    assert_eq!(v["report"]["output"]["epsilon"], serde_json::json!([0, 1, -1, 0]));
    assert_eq!(v["seed"], 0);
}

#[test]
fn empty_word_echoes_feed() {
    let o = run(&["mutate", "--feed", "g2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("returns_to_input: true"));
}

#[test]
fn pentagon_word_on_a2() {
    let w = "m1 p(1 2) m1 p(1 2) m1 p(1 2) m1 p(1 2) m1 p(1 2)";
    let (_, v) = json(&["mutate", "--feed", "a2", "--word", w]);
    assert_eq!(v["report"]["returns_to_input"], true);
    let (_, v) = json(&["mutate", "--feed", "a2", "--word", "m1 p(1 2) m1"]);
    assert_eq!(v["report"]["returns_to_input"], false);
}

#[test]
fn phase_check_builtin_suite_and_negative_control() {
    let o = run(&["phase-check", "--all", "--builtin-suite"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("NOT identity"));
    let o = run(&["phase-check", "--all", "--builtin-suite", "--negative-control"]);
    assert_eq!(o.status.code(), Some(1));
    let (_, v) = json(&["phase-check", "--all", "--builtin-suite", "--negative-control"]);
    let cases = v["report"]["cases"].as_array().unwrap();
    assert!(cases.iter().all(|c| c["identity"] == false));
}

#[test]
fn phase_check_custom_embedded_g2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    // G2 block at (1, 2), d = (1, 3, 1, 1, 1), with couplings
    let feed = r#"{"n":5,"epsilon":[0,3,0,-1,0, -1,0,1,0,0, 0,-3,0,0,0, 1,0,0,0,2, 0,0,0,-2,0],"d":[1,3,1,1,1]}"#;
    std::fs::write(&path, feed).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["phase-check", "--feed", p, "--relation", "g2", "--pair", "1,2"]);
    assert_eq!(code, 0, "{v}");
    let o = run(&["phase-check", "--feed", p, "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("G2 custom pair=(1,2) n=5: identity"));
}

#[test]
fn series_checks() {
    let o = run(&["series-check", "--identity", "pentagon", "--order", "4", "--qcutoff", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["series-check", "--identity", "pentagon-qxy", "--order", "4", "--qcutoff", "30"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["series-check", "--identity", "conjugation", "--feed", "b2", "--order", "3", "--qcutoff", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["series-check", "--identity", "conjugation"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qdilog_eval_and_check() {
    let (code, v) = json(&["qdilog", "eval", "--z", "0,0"]);
    assert_eq!(code, 0);
    let re = v["report"]["value"][0].as_f64().unwrap();
    let im = v["report"]["value"][1].as_f64().unwrap();
    assert!(((re * re + im * im).sqrt() - 1.0).abs() < 1e-10);
    // the continuation hits the pole at -πi(1+ħ)
    let z = format!("0,{}", -std::f64::consts::PI * std::f64::consts::SQRT_2);
    let (code, v) = json(&["qdilog", "eval", "--z", &z]);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["pole"], true);
    let o = run(&["qdilog", "check", "--suite", "functional", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("functional equations"));
    // contour choice matters: a counter-finding, not a usage error
    let o = run(&["qdilog", "check", "--suite", "detour"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("detour residue prediction"));
    let o = run(&["qdilog", "eval", "--z", "0,0", "--hbar", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rep_check_witness_table() {
    let o = run(&["rep-check", "--feed", "a2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("new flavor fails"));
    let o = run(&["rep-check", "--feed", "a1xa1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("new flavor fails"));
}

#[test]
fn explore_dot_and_trivial_words() {
    let o = run(&["explore", "--feed", "a2", "--dot"]);
    assert!(stdout(&o).starts_with("digraph mutations {"));
    let (code, v) = json(&["explore", "--feed", "a2", "--trivial-words", "--max-len", "6", "--seed", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["report"]["graph"]["closed"], true);
    let found = v["report"]["trivial_words"]["found"].as_array().unwrap();
    assert!(found.iter().any(|w| w["word"] == "m1 m2 m1 m2 m1 p(1 2)"));
}

#[test]
fn reports_are_deterministic_and_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let args = ["explore", "--feed", "a1xa1", "--trivial-words", "--max-len", "4", "--seed", "9"];
    let o = run(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(o.status.success() && o.stdout.is_empty());
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.contains("seed: 9"));
    assert_eq!(stdout(&run(&args)), first);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["mutate", "--feed", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["mutate", "--feed", "a2", "--word", "m3"]).status.code(), Some(2));
    assert_eq!(run(&["mutate", "--feed", r#"{"n":2,"epsilon":[0,1,1,0]}"#]).status.code(), Some(2));
    assert_eq!(run(&["phase-check", "--feed", "a2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}
