use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatmorse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn hn_genus_two() {
    let o = run(&["hn", "--g", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + t^2 + 4t^3 + t^4 + t^6");
}

#[test]
fn irregular_weights_exit_two_with_witness() {
    let o = run(&["regular", "--weights", "1/2,1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("J = {1}"));
}

#[test]
fn betti_two_punctures() {
    let o = run(&[
        "betti",
        "--g",
        "1",
        "--weights",
        "9/10,1/10",
        "--base",
        "empty",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + 2t^2 + t^4");
}

#[test]
fn float_weights_are_rejected() {
    assert_eq!(run(&["betti", "--weights", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["betti", "--unknown-flag"]).status.code(), Some(2));
}

#[test]
fn json_has_schema() {
    let o = run(&["dim", "--g", "2", "--weights", "1/3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["dimension"], 8);
}

#[test]
fn user_supplied_base() {
    let o = run(&[
        "betti",
        "--g",
        "1",
        "--weights",
        "1/3,1/3,1/3",
        "--base",
        "poly:1",
    ]);
    assert_eq!(stdout(&o), "1 + 4t^2 + 2t^3 + 4t^4 + t^6");
    let o = run(&[
        "betti",
        "--g",
        "0",
        "--weights",
        "1/3,1/3,1/3",
        "--base",
        "poly:1,-1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_override() {
    let dir = std::env::temp_dir().join(format!("flatmorse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.cfg");
    std::fs::write(&path, "# job\ng = 2\nweights = 1/2\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(
        stdout(&run(&["betti", "--config", p])),
        "1 + 2t^2 + 4t^3 + 2t^4 + 4t^5 + 2t^6 + t^8"
    );
    assert_eq!(
        stdout(&run(&["betti", "--config", p, "--g", "1"])),
        "1 + t^2"
    );
    std::fs::write(&path, "nonsense = 3\n").unwrap();
    assert_eq!(run(&["betti", "--config", p]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_commands_pass() {
    let o = run(&["verify-critical", "--g", "1", "--weights", "9/10,1/10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify-regular", "--g", "2", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&[
        "probe-empty",
        "--g",
        "0",
        "--weights",
        "9/10,1/10",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"]["verdict"], "probably_empty");
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "7", "--format", "json"]);
    let b = run(&["selftest", "--seed", "7", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn zero_tolerance_fails_loudly() {
    let o = run(&["selftest", "--fd-rel-tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] dmu vs finite differences"));
}
