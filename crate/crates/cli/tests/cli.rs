use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_mimo-select");

const SMALL: &str = r#"
[array]
tx_elements = 4
rx_elements = 4

[target]
angle_deg = 25.0
snr_db = 20.0

[[interferers]]
angle_deg = 40.0
inr_db = 13.0
kind = "deliberate"

[selection]
tx_select = 2
rx_select = 2

[sweep]
start_deg = 0.0
stop_deg = 30.0
step_deg = 10.0
trials = 8
seed = 5
"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("MIMO_SELECT_JOBS", "2")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn repo_config(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn design_writes_a_result_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("design.json");
    let res = run(&[
        "design",
        "--config",
        &repo_config("example1_design.toml"),
        "--out",
        s(&out),
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("converged     true"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let tx = doc["tx_mask"].as_str().unwrap();
    assert_eq!(tx.len(), 8);
    assert_eq!(tx.matches('1').count(), 4);
    assert_eq!(doc["rx_mask"].as_str().unwrap().matches('1').count(), 4);
    assert_eq!(doc["weights"].as_array().unwrap().len(), 16);
    assert!(doc["trace"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn invalid_angle_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        &SMALL.replace("angle_deg = 25.0", "angle_deg = 200.0"),
    );
    let res = run(&["design", "--config", s(&cfg)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("target.angle_deg"));
}

#[test]
fn empty_grid_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        &SMALL
            .replace("stop_deg = 30.0", "stop_deg = 0.0\nmode = \"relative\"")
            .replace("start_deg = 0.0", "start_deg = 10.0"),
    );
    let out = dir.path().join("x.csv");
    let res = run(&["sweep", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("sweep"));
}

#[test]
fn usage_errors_and_missing_files() {
    assert_eq!(run(&["sweep", "--config", "x.toml"]).status.code(), Some(1));
    assert_eq!(
        run(&["design", "--config", "/nonexistent/x.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_is_deterministic_with_oracle_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(
        run(&["sweep", "--config", s(&cfg), "--out", s(&a), "--oracle"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&[
            "sweep",
            "--config",
            s(&cfg),
            "--out",
            s(&b),
            "--oracle",
            "--jobs",
            "1"
        ])
        .status
        .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "angle_deg,sinr_full_db,sinr_sca_db,sinr_oracle_db,sinr_random_median_db,sinr_random_best_db,tx_mask,rx_mask,iterations,converged,status"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let sca: f64 = row[2].parse().unwrap();
        let oracle: f64 = row[3].parse().unwrap();
        assert!(oracle >= sca);
        assert_eq!(row[10], "ok");
    }
}

#[test]
fn oracle_retains_every_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.csv");
    let res = run(&[
        "oracle",
        "--config",
        &repo_config("example1_design.toml"),
        "--out",
        s(&out),
        "--retain-all",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("tx_mask,rx_mask,sinr_db"));
    assert_eq!(text.lines().count(), 4901);

    let best = dir.path().join("best.csv");
    assert_eq!(
        run(&[
            "oracle",
            "--config",
            &repo_config("example1_design.toml"),
            "--out",
            s(&best)
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(std::fs::read_to_string(&best).unwrap().lines().count(), 2);
}

#[test]
fn random_baseline_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let a = run(&["random-baseline", "--config", s(&cfg), "--trials", "20"]);
    let b = run(&["random-baseline", "--config", s(&cfg), "--trials", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 21);
    assert!(String::from_utf8_lossy(&a.stderr).contains("median"));
    assert_eq!(
        run(&["random-baseline", "--config", s(&cfg), "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
}
