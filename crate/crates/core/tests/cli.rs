use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
name = "small"

[model]
p = 2.0

[grid]
lo = [-2.0]
hi = [2.0]
cells = [160]

[time]
t_final = 0.6
stride = 200

[datum]
kind = "box"
lo = [-0.5]
hi = [0.5]
beta = 1.0

[analysis.front]
directions = [[1.0], [-1.0]]
tolerance = TOL

[analysis.spreading]
slack_cells = 2.0
"#;

fn tempered(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tempered"));
    cmd.args(args).env_remove("TEMPERED_OUT_DIR");
    if let Some(dir) = out_env {
        cmd.env("TEMPERED_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, tol: &str) -> String {
    let path = dir.join("small.toml");
    fs::write(&path, SMALL.replace("TOL", tol)).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_accepts_a_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "0.2");
    let o = tempered(&["check", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("small: ok"));
}

#[test]
fn check_rejects_bad_values_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, SMALL.replace("TOL", "0.2").replace("p = 2.0", "p = 0.5")).unwrap();
    let o = tempered(&["check", "--config", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("model.p") && err.contains("line 5"), "{err}");
}

#[test]
fn check_rejects_unknown_keys_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.toml");
    fs::write(&path, SMALL.replace("TOL", "0.2").replace("stride", "strid")).unwrap();
    let o = tempered(&["check", "--config", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("strid"), "{}", stderr(&o));
    let missing = dir.path().join("nope.toml");
    assert_eq!(tempered(&["check", "--config", missing.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn run_writes_artifacts_to_the_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "0.2");
    let out = dir.path().join("env-out");
    let o = tempered(&["run", "--config", &cfg], Some(&out));
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("PASS front.speed[0]"));
    for f in ["report.json", "manifest.json", "mass.csv", "front.csv", "front_1.csv", "support.json"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    assert!(out.join("fields").join("snap_0000.csv").is_file());
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["name"], "small");
    assert_eq!(manifest["config"]["grid"]["cells"][0], 160);
}

#[test]
fn out_flag_wins_over_the_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "0.2");
    let (env_dir, flag_dir) = (dir.path().join("env"), dir.path().join("flag"));
    let o = tempered(&["run", "--config", &cfg, "--out", flag_dir.to_str().unwrap()], Some(&env_dir));
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.join("report.json").is_file());
    assert!(!env_dir.exists());
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "1e-9");
    let o = tempered(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL front.speed[0]"));
}

#[test]
fn reruns_are_bit_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "0.2");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(tempered(&["run", "--config", &cfg, "--out", a.to_str().unwrap()], None).status.code(), Some(0));
    assert_eq!(tempered(&["run", "--config", &cfg, "--out", b.to_str().unwrap(), "--threads", "3"], None).status.code(), Some(0));
    let mut files = 0;
    for entry in walk(&a) {
        let rel = entry.strip_prefix(&a).unwrap();
        assert_eq!(fs::read(&entry).unwrap(), fs::read(b.join(rel)).unwrap(), "{} differs", rel.display());
        files += 1;
    }
    assert!(files > 5);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn demo_lists_and_rejects_unknown_names() {
    let o = tempered(&["demo"], None);
    assert_eq!(o.status.code(), Some(0));
    let list = stdout(&o);
    for name in ["front_speed_1d", "anisotropic_2d", "comparison_1d", "subsolution_1d", "supersolution_2d", "rankine_hugoniot_1d"] {
        assert!(list.lines().any(|l| l == name), "{name} not listed");
    }
    let o = tempered(&["demo", "no_such_demo"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("front_speed_1d"));
}

#[test]
fn front_speed_demo_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = tempered(&["demo", "front_speed_1d"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(dir.path().join("front.csv").is_file());
    assert!(dir.path().join("report.json").is_file());
}
