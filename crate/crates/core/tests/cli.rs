use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bundled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/paper_default.json")
}

fn weldarm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weldarm")).args(args).output().unwrap()
}

fn write_config(dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(bundled()).unwrap()).unwrap();
    edit(&mut v);
    let path = dir.join("config.json");
    fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn missing_radius_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |v| {
        v["pipe"].as_object_mut().unwrap().remove("radius_m");
    });
    let out_dir = dir.path().join("out");
    let out = weldarm(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pipe.radius"));
    assert!(!out_dir.exists());
}

#[test]
fn unknown_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |v| {
        v["sim"]["frobnicate"] = serde_json::json!(1);
    });
    let out = weldarm(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreachable_pipe_exits_3_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |v| {
        v["pipe"]["center_x_m"] = serde_json::json!(40.0);
    });
    let out_dir = dir.path().join("out");
    let out = weldarm(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let leftovers = fs::read_dir(&out_dir).map(|d| d.count()).unwrap_or(0);
    assert_eq!(leftovers, 0);
}

#[test]
fn missing_config_file_exits_4() {
    let out = weldarm(&["check", "--config", "/nonexistent/weldarm.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn ik_home_pose() {
    let cfg = bundled();
    let out = weldarm(&[
        "ik", "--config", cfg.to_str().unwrap(), "--x", "13.8", "--z", "3.45", "--phi", "0", "--theta2", "0", "--theta3", "0",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let degrees = text.lines().find_map(|l| l.strip_prefix("degrees: ")).unwrap();
    for d in degrees.split_whitespace() {
        assert!(d.parse::<f64>().unwrap().abs() < 1e-4, "{text}");
    }
}

#[test]
fn ik_out_of_reach_exits_3() {
    let cfg = bundled();
    let out = weldarm(&[
        "ik", "--config", cfg.to_str().unwrap(), "--x", "30", "--z", "0", "--phi", "0", "--theta2", "0", "--theta3", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_reports_penetrations() {
    let out = weldarm(&["check", "--config", bundled().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("planned samples: 360"));
    assert!(text.contains("penetrating samples: 79"));
}
