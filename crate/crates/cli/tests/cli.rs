//! End-to-end tests of the `tspec` binary: exit codes, output determinism,
//! file output, and stderr diagnostics.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn tspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tspec"))
        .args(args)
        .env("TSPEC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn temp_file(content: &str) -> tempfile_path::TempPath {
    tempfile_path::write(content)
}

/// Minimal scoped temp-file helper (std only).
mod tempfile_path {
    use std::path::PathBuf;
    use std::sync::atomic::{AtomicU64, Ordering};

    static COUNTER: AtomicU64 = AtomicU64::new(0);

    pub struct TempPath(pub PathBuf);

    impl Drop for TempPath {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.0);
        }
    }

    pub fn write(content: &str) -> TempPath {
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        let path = std::env::temp_dir().join(format!("tspec-test-{}-{n}.toml", std::process::id()));
        std::fs::write(&path, content).expect("temp write");
        TempPath(path)
    }

    pub fn reserve(ext: &str) -> TempPath {
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        TempPath(std::env::temp_dir().join(format!("tspec-test-{}-{n}.{ext}", std::process::id())))
    }
}

#[test]
fn spectrum_succeeds_with_exit_zero() {
    let out = tspec(&[
        "spectrum",
        corpus("z_d2.toml").to_str().unwrap(),
        "--kmax",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<&str> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["count"].as_str().unwrap())
        .collect();
    assert_eq!(counts, vec!["1", "3", "7", "15", "31"]);
}

#[test]
fn missing_file_exits_two() {
    let out = tspec(&["spectrum", "/nonexistent/nope.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_toml_exits_two() {
    let f = temp_file("this is not [valid toml");
    let out = tspec(&["spectrum", f.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_entry_exits_two_with_field_path() {
    let f = temp_file(
        r#"
[group]
rank = 1
holonomy = [[["x"]]]

[endo]
linear = [[2]]
"#,
    );
    let out = tspec(&["spectrum", f.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("group.holonomy[0][0][0]"), "stderr: {err}");
}

#[test]
fn torsion_presentation_exits_three() {
    let f = temp_file(
        r#"
[group]
rank = 1
holonomy = [[[1]], [[-1]]]
affine = [["0"], ["0"]]

[endo]
linear = [[2]]
holonomy_map = [0, 1]
"#,
    );
    let out = tspec(&["spectrum", f.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn short_window_exits_four() {
    let out = tspec(&["zeta", corpus("z_d2.toml").to_str().unwrap(), "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn infinite_counts_exit_five() {
    let out = tspec(&["zeta", corpus("z_d1.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    let out = tspec(&["classify", corpus("z_dm1.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn spectrum_handles_infinite_levels() {
    let out = tspec(&[
        "spectrum",
        corpus("z_dm1.toml").to_str().unwrap(),
        "--kmax",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<&str> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["count"].as_str().unwrap())
        .collect();
    assert_eq!(counts, vec!["2", "inf", "2", "inf"]);
    assert_eq!(v["levels"][1]["new_classes"], serde_json::Value::Null);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (cmd, file, extra) in [
        ("spectrum", "torus_fib.toml", vec!["--kmax", "12"]),
        ("zeta", "torus_fib.toml", vec!["--kmax", "12"]),
        ("classify", "klein_2_3.toml", vec!["--kmax", "12"]),
        ("verify", "klein_2_3.toml", vec!["--kmax", "6"]),
        ("orbits", "torus_fib.toml", vec!["--k", "4"]),
        ("heights", "z_dm2.toml", vec!["--kmax", "12"]),
    ] {
        let path = corpus(file);
        let mut args = vec![cmd, path.to_str().unwrap()];
        args.extend(extra.iter().copied());
        let a = tspec(&args);
        let b = tspec(&args);
        assert_eq!(a.status.code(), Some(0), "{cmd} failed");
        assert_eq!(
            a.stdout, b.stdout,
            "{cmd} output differs between identical runs"
        );
    }
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_empty() {
    let target = tempfile_path::reserve("json");
    let out = tspec(&[
        "zeta",
        corpus("z_d2.toml").to_str().unwrap(),
        "--kmax",
        "12",
        "--out",
        target.0.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target.0).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["command"], "zeta");
    assert!(written.ends_with('\n'));
}

#[test]
fn rational_linear_part_warns_on_stderr() {
    let f = temp_file(
        r#"
[group]
rank = 1
holonomy = [[[1]], [[-1]]]

[endo]
linear = [["1/2"]]
holonomy_map = [0, 1]
"#,
    );
    let out = tspec(&["spectrum", f.0.to_str().unwrap(), "--kmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("warning"), "stderr: {err}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<&str> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["count"].as_str().unwrap())
        .collect();
    assert_eq!(counts, vec!["1"; 6]);
}

#[test]
fn thread_cap_is_respected_and_output_stable() {
    let path = corpus("torus_fib.toml");
    let args = ["verify", path.to_str().unwrap(), "--kmax", "6"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tspec"))
            .args(args)
            .env("TSPEC_THREADS", threads)
            .output()
            .expect("binary runs")
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(four.status.code(), Some(0));
    let va: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&four.stdout).unwrap();
    assert_eq!(va["threads"], serde_json::json!(1));
    assert_eq!(vb["threads"], serde_json::json!(4));
    assert_eq!(va["levels"], vb["levels"]);
    assert_eq!(va["zeta_roundtrip"], vb["zeta_roundtrip"]);
}

#[test]
fn verify_reports_budget_skips() {
    let out = tspec(&[
        "verify",
        corpus("klein_2_3.toml").to_str().unwrap(),
        "--kmax",
        "9",
        "--budget",
        "100000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let statuses: Vec<&str> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["status"].as_str().unwrap())
        .collect();
    assert!(statuses.contains(&"ok"));
    assert!(statuses.contains(&"skipped_budget"));
}
