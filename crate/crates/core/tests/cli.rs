use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trihomo")).args(args).env_remove("TRIHOMO_DATA").output().unwrap()
}

fn run_with_data(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trihomo")).args(args).env("TRIHOMO_DATA", dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn copy_data() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for e in fs::read_dir(DATA).unwrap() {
        let e = e.unwrap();
        fs::copy(e.path(), dir.path().join(e.file_name())).unwrap();
    }
    dir
}

#[test]
fn gen_symbolic_and_evaluated() {
    let o = run(&["gen", "gluck-T"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["genus"], 4);
    assert_eq!(v["alpha"][3][3], "3+2n");

    let o = run(&["gen", "gluck-T", "--n", "1"]);
    let v = json(&o);
    assert_eq!(v["alpha"][3], serde_json::json!([1, 0, -4, 5, 1, 1, 1, -1]));
    assert!(v["variable"].is_null());
}

#[test]
fn gen_standard_sphere() {
    let v = json(&run(&["gen", "standard-sphere", "--g", "1", "--counts", "0,0,1"]));
    assert_eq!(v["alpha"], serde_json::json!([[1, 0]]));
    assert_eq!(v["beta"], serde_json::json!([[1, 0]]));
    assert_eq!(v["gamma"], serde_json::json!([[0, 1]]));
    assert_eq!(code(&run(&["gen", "standard-sphere", "--g", "2", "--counts", "1,0,0"])), 2);
}

#[test]
fn gen_is_reproducible_and_writes_files() {
    let a = run(&["gen", "theorem2-step", "--step", "3"]);
    let b = run(&["gen", "theorem2-step", "--step", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s3.json");
    assert_eq!(code(&run(&["gen", "theorem2-step", "--step", "3", "--out", out.to_str().unwrap()])), 0);
    assert_eq!(fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn unknown_ids_and_commands_are_usage_errors() {
    assert_eq!(code(&run(&["gen", "no-such-thing"])), 2);
    assert_eq!(code(&run(&["gen", "theorem2-step", "--step", "9"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["standard", "/nonexistent/matrix.json"])), 2);
}

#[test]
fn replay_bundled_certificate() {
    let o = run(&["replay", "builtin:gluck-T", "--cert", "builtin:theorem2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["assertions_passed"], true);
    let checked = v["steps"].as_array().unwrap().iter().filter(|s| s["passed"] == true).count();
    assert_eq!(checked, 7);
    assert!(v["standard"].is_object());

    let o = run(&["replay", "builtin:gluck-T", "--cert", "builtin:theorem2", "--n", "2", "--strict"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn replay_locates_a_corrupted_display() {
    let dir = copy_data();
    let step2 = dir.path().join("theorem2_step2.json");
    let text = fs::read_to_string(&step2).unwrap().replacen("[0, 1, -1, 0, 0, 0, 0, 0]", "[0, 1, -1, 0, 0, 0, 0, 9]", 1);
    fs::write(&step2, text).unwrap();
    let cert = dir.path().join("theorem2.cert");
    let o = run(&["replay", "builtin:gluck-T", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let failed: Vec<&Value> = v["steps"].as_array().unwrap().iter().filter(|s| s["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["step"], 2);
    assert_eq!(failed[0]["mismatches"][0]["family"], "beta");
    assert_eq!(failed[0]["mismatches"][0]["index"], 2);
}

#[test]
fn malformed_certificate_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("bad.cert");
    fs::write(&cert, "genus 4\nslide f=alpha i=1 j=1 m=1\n").unwrap();
    let o = run(&["replay", "builtin:gluck-T", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn data_override_is_checksummed() {
    let dir = copy_data();
    let o = run_with_data(dir.path(), &["gen", "theorem2-final"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(o.stdout, run(&["gen", "theorem2-final"]).stdout);

    let f = dir.path().join("theorem2_final.json");
    let text = fs::read_to_string(&f).unwrap();
    fs::write(&f, format!("{text}\n")).unwrap();
    let o = run_with_data(dir.path(), &["gen", "theorem2-final"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("checksum"), "{}", stderr(&o));
}

#[test]
fn standard_exit_codes() {
    let o = run(&["standard", "builtin:theorem2-final"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["standard"], true);
    let o = run(&["standard", "builtin:gluck-T"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["standard"], false);
}

#[test]
fn snf_of_the_first_pair() {
    let o = run(&["snf", "builtin:gluck-T", "--pair", "alpha,beta", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["invariant_factors"], serde_json::json!([1, 1, 1, 1, 1, 1, 1, 0]));
    assert_eq!(v["free_rank"], 1);
    assert_eq!(v["torsion"], serde_json::json!([]));
    let o = run(&["snf", "builtin:gluck-T", "--pair", "gamma,alpha", "--n", "5"]);
    assert_eq!(json(&o)["free_rank"], 2);
    assert_eq!(code(&run(&["snf", "builtin:gluck-T", "--pair", "alpha,beta"])), 2);
    assert_eq!(code(&run(&["snf", "builtin:gluck-T", "--pair", "alpha", "--n", "1"])), 2);
}

#[test]
fn validate_ranges() {
    let o = run(&["validate", "builtin:gluck-T", "--n", "1..3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["ok"], true);
    let at = v["pair_homology"].as_array().unwrap();
    assert_eq!(at.len(), 3);
    assert!(at.iter().all(|a| a["free_rank_sum"] == 4));

    let dir = tempfile::tempdir().unwrap();
    let lens = dir.path().join("lens.json");
    fs::write(&lens, r#"{"genus": 1, "alpha": [[1, 0]], "beta": [[1, 3]], "gamma": [[0, 1]]}"#).unwrap();
    let o = run(&["validate", lens.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn search_solves_a_planted_instance() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let cert = dir.path().join("found.cert");
    // one slide away from a standard sphere
    fs::write(
        &input,
        r#"{"genus": 2, "alpha": [[1, 0, 0, 0], [1, 1, 0, 0]], "beta": [[0, 0, 1, 0], [0, 0, 0, 1]], "gamma": [[0, 0, 1, 0], [0, 0, 0, 1]]}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["standard", input.to_str().unwrap()])), 1);
    let o = run(&["search", input.to_str().unwrap(), "--max-depth", "3", "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["replay", input.to_str().unwrap(), "--cert", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(json(&o)["standard"].is_object());

    let o = run(&["search", "builtin:gluck-T"]);
    assert_eq!(code(&o), 2, "symbolic input needs --n");
}
