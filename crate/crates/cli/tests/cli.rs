use std::path::PathBuf;
use std::process::{Command, Output};

use entropic_energy::Joint;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropic-energy"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn entropy_of_hegarty_file() {
    let o = run(&["entropy", data("hegarty.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "H = 3.000000 bits\n");
}

#[test]
fn bundled_files_round_trip() {
    for f in std::fs::read_dir(data("")).unwrap() {
        let path = f.unwrap().path();
        let s = std::fs::read_to_string(&path).unwrap();
        let j = Joint::from_json_str(&s).unwrap();
        assert_eq!(j.to_json_string(), s, "{}", path.display());
    }
}

#[test]
fn energy_self_on_u012() {
    let o = run(&["energy", "self", data("u012.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = v["values"]["s"].as_f64().unwrap();
    assert!((s - 0.6121972227).abs() < 1e-9);
    let a = v["values"]["A"].as_f64().unwrap();
    assert!((a - (3.0 * 3f64.log2() - s)).abs() < 1e-9);
}

#[test]
fn mismatched_specs_exit_2() {
    let o = run(&["energy", "add", data("hegarty.json").to_str().unwrap(), data("fp_star_5.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("carriers do not match"));
}

#[test]
fn parse_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"spec":{"kind":"integers_mod","n":3},"arity":1,"probs":[[[["7"]],"1/1"]]}"#).unwrap();
    let o = run(&["entropy", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("probs[0][0][0]"));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--suite", "SUBMOD", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--suite", "NOPE", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["verify", "--suite", "LEM_A2", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let law = &v["laws"][0];
    assert_eq!(law["id"], "LEM_A2");
    assert_eq!(law["trials"], 50);
    assert!(law["minSlack"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn verify_flags_only_the_probe() {
    let o = run(&["verify", "--suite", "CS_PROBE,BSG", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["laws"][0]["failures"].as_u64().unwrap() >= 1);
    assert_eq!(v["laws"][1]["failures"], 0);
}

#[test]
fn reproduce_targets() {
    let o = run(&["reproduce", "hegarty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for needle in ["H(X+Y) = 4.507049", "H(X+X') = 4.513105", "A(X,Y) = 7.492951", "A(X) = 7.486895"] {
        assert!(out.contains(needle), "{out}");
    }
    let o = run(&["reproduce", "sidon012", "--base", "nats"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("s(X) = 0.424343 nats"));
    assert_eq!(run(&["reproduce", "subfield", "--q", "4"]).status.code(), Some(2));
    assert_eq!(run(&["reproduce", "subfield", "--q", "13"]).status.code(), Some(0));
}

#[test]
fn out_file_and_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scan.csv");
    let o = run(&["scan", "sumproduct", "--p", "7", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&p).unwrap();
    assert!(csv.starts_with("descriptor,H,A,M,ratio,flags\n"));
    assert_eq!(csv.lines().count(), 1 + 63);

    let q = dir.path().join("never.csv");
    let o = run(&["scan", "sumproduct", "--p", "8", "--out", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!q.exists());
}

#[test]
fn budget_override() {
    let o = bin().args(["scan", "cs"]).env("ENTROPIC_ENERGY_BUDGET", "100").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let o = bin().args(["scan", "cs", "--lo", "0", "--hi", "3", "--size", "2"]).env("ENTROPIC_ENERGY_BUDGET", "100").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "set,margin,A(X,Y),A(X)\n");
}

#[test]
fn scans_never_fail() {
    let o = run(&["scan", "gk", "--p", "5", "--k", "1", "--dist", data("fp_star_5.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H(sum of 1 products) = 2.000000 bits"));
    let o = run(&["scan", "real", "--family", "gp", "--max-size", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    let o = run(&["scan", "sumproduct", "--p", "11", "--mode", "random", "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 21);
}
