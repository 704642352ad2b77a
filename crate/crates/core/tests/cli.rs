use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn halab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn complement_identity_writes_fifty_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment":"complement-identity","p":101,"trials":50,"seed":7}"#,
    );
    let out = halab(
        &["run", "complement-identity", "--config", &cfg, "--out", "o"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o/complement-identity.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("experiment,instance_id,quantity,lhs,rhs,relation,pass")
    );
    assert_eq!(lines.count(), 50);
    let env: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/complement-identity.json")).unwrap()).unwrap();
    assert_eq!(env["report"]["seed"], 7);
    assert_eq!(env["report"]["config"]["trials"], 50);
    assert_eq!(env["hash"].as_str().map(str::len), Some(64));
}

#[test]
fn tk_oracle_example_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "t.json",
        r#"{"experiment":"tk-oracle","N":17,"k":3,"sizes":[4,6,8],"seed":1}"#,
    );
    let out = halab(&["run", "tk-oracle", "--config", &cfg, "--out", "."], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "b.json", r#"{"experiment":"dirichlet","eps":"1/0"}"#);
    assert_eq!(
        halab(&["run", "dirichlet", "--config", &bad], dir.path()).status.code(),
        Some(2)
    );
    let unknown = write(dir.path(), "u.json", r#"{"experiment":"dirichlet","epsilon":"1/3"}"#);
    assert_eq!(
        halab(&["run", "dirichlet", "--config", &unknown], dir.path())
            .status
            .code(),
        Some(2)
    );
    let other = write(dir.path(), "o.json", r#"{"experiment":"charsmall"}"#);
    assert_eq!(
        halab(&["run", "dirichlet", "--config", &other], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(halab(&["run", "no-such-experiment"], dir.path()).status.code(), Some(2));
    assert_eq!(halab(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        halab(&["run", "dirichlet", "--config", "missing.json"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failed_assertion_exits_one_and_names_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "l.json",
        r#"{"experiment":"littlewood-growth","m_values":[2,4,8],"ratio_from":4,"ratio_lo":0.9}"#,
    );
    let out = halab(&["run", "littlewood-growth", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("m=00004") && err.contains("integral_over_log_m"), "{err}");
}

#[test]
fn list_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = halab(&["list"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 15);
    assert!(text.contains("main-scan") && text.contains("lebedev-extract"));

    let out = halab(&["run", "dirichlet", "--seed", "9", "--out", "d"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let env: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d/dirichlet.json")).unwrap()).unwrap();
    assert_eq!(env["report"]["seed"], 9);
}
