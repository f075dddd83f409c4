use std::path::PathBuf;
use std::process::Command;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn atlas(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_atlas")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn cfg(name: &str) -> String {
    config(name).to_string_lossy().into_owned()
}

#[test]
fn bernstein_reports() {
    let (code, out, _) = atlas(&["bernstein", "--config", &cfg("a2_sc.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("W^s = 1 (order 1)"), "{out}");
    let (_, out, _) = atlas(&["bernstein", "--config", &cfg("a2_ad.toml")]);
    assert!(out.contains("W^s = Z/3 (order 3)"), "{out}");
    let (_, out, _) = atlas(&["bernstein", "--config", &cfg("pgl2.toml")]);
    assert!(out.contains("H = G"), "{out}");
    let (_, out, _) = atlas(&["bernstein", "--config", &cfg("g2_quadratic.toml")]);
    assert!(out.contains("H: A1xA1, connected"), "{out}");
    assert!(out.contains("condition on p = 7: satisfied"), "{out}");
}

#[test]
fn triangle_and_packets_succeed() {
    let (code, out, _) = atlas(&["triangle", "--config", &cfg("pgl2.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("total: extq2 = 5, klr = 5, match = true"), "{out}");
    let (code, out, _) = atlas(&["packets", "--config", &cfg("pgl2.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("{p2, p3}"), "{out}");
    let (code, out, _) = atlas(&["springer", "--config", &cfg("g2_quadratic.toml"), "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn json_output_parses_and_is_deterministic() {
    let args = ["packets", "--config", &cfg("g2_quadratic.toml"), "--bound", "3", "--json"];
    let (code, a, _) = atlas(&args);
    let (_, b, _) = atlas(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["theta_consistent"], serde_json::Value::Bool(true));
    assert!(v["packets"].as_array().unwrap().len() > 1);
}

#[test]
fn config_errors_exit_with_three() {
    let (code, _, err) = atlas(&["bernstein", "--config", "/nonexistent/job.toml"]);
    assert_eq!(code, 3);
    assert!(err.contains("config error"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "type = \"A2\"\n[character]\ngenerators = [[\"1/2\"]]\n").unwrap();
    let (code, _, _) = atlas(&["bernstein", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    std::fs::write(&bad, "type = \"E8\"\n").unwrap();
    let (code, _, _) = atlas(&["bernstein", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
}
