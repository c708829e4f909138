use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzy-fif"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn error_code(out: &Output) -> String {
    let err = String::from_utf8_lossy(&out.stderr);
    let v: serde_json::Value = serde_json::from_str(err.trim()).expect("stderr is JSON");
    v["error"].as_str().unwrap().to_string()
}

fn with_config(dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fixture("compatible.json")).unwrap()).unwrap();
    edit(&mut v);
    let path = dir.join("config.json");
    fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn validate_passes_on_compatible_data() {
    let out = run(&[
        "validate",
        "--config",
        fixture("compatible.json").to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall            PASS"));
}

#[test]
fn validate_reports_matching_failure() {
    let out = run(&[
        "validate",
        "--config",
        fixture("example1.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "ValidationFailed");
    assert!(String::from_utf8_lossy(&out.stdout).contains("matching           FAIL"));
}

#[test]
fn build_writes_tables_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture("compatible.json");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&[
            "build",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--grid",
            "256",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ta = fs::read(a.join("fif_samples.csv")).unwrap();
    assert_eq!(ta, fs::read(b.join("fif_samples.csv")).unwrap());
    assert_eq!(String::from_utf8_lossy(&ta).lines().count(), 258);
    assert_eq!(
        fs::read(a.join("manifest.json")).unwrap(),
        fs::read(b.join("manifest.json")).unwrap()
    );
}

#[test]
fn build_refuses_example1_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture("example1.json");
    let args = [
        "build",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "MatchingNotVerified");
    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(run(&forced).status.success());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(&["build", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(4));
    assert_eq!(error_code(&missing), "Io");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let parsed = run(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(parsed.status.code(), Some(2));
    assert_eq!(error_code(&parsed), "ConfigParse");

    let scale = with_config(dir.path(), |v| v["scales"][0] = 1.0.into());
    let out = run(&["validate", "--config", scale.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "ScaleOutOfRange");

    let cfg = fixture("compatible.json");
    let out = run(&[
        "build",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--max-depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_code(&out), "NoConvergence");
}

#[test]
fn levels_with_empty_list_writes_manifest_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("compatible.json");
    let out = run(&[
        "levels",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--lambdas",
        "",
    ]);
    assert!(out.status.success());
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, vec![std::ffi::OsString::from("manifest.json")]);

    let out = run(&[
        "levels",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--lambdas",
        "1,0.5",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.matches("PASS").count(), 2, "{stdout}");
    assert!(dir.path().join("levels_1.csv").exists());
}

#[test]
fn holder_reports_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with_config(dir.path(), |v| {
        v["scales"] = serde_json::json!([0.1, 0.1, 0.1, 0.1]);
        v["hoelder_pairs"] = 500.into();
    });
    let out = run(&[
        "holder",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("delta_lt_1"));
    assert!(stdout.contains("bound check PASS"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("holder.json")).unwrap()).unwrap();
    assert_eq!(report["constants"]["tau"], 1.0);
}

#[test]
fn export_lists_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with_config(dir.path(), |v| {
        v["hoelder_pairs"] = 200.into();
        v["grid"] = 256.into();
    });
    let out = run(&[
        "export",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("bundle").to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 5);
    assert!(stdout
        .lines()
        .all(|l| l.split_whitespace().next().unwrap().len() == 64));
}
