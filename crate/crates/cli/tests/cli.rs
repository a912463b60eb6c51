use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn freedim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freedim"))
        .args(args)
        .env_remove("FREEDIM_TOL")
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn every_shipped_config_runs_quickly() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let raw: serde_json::Value =
            serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        let scenario = raw["scenario"].as_str().unwrap().to_string();
        let start = Instant::now();
        let out = freedim(&[&scenario, "--config", path.to_str().unwrap()]);
        assert!(
            start.elapsed() < Duration::from_secs(10),
            "{}",
            path.display()
        );
        let report = json(&out);
        assert_eq!(report["schema"], 1);
        assert_eq!(report["tool"], "freedim");
        assert_eq!(report["scenario"], scenario.as_str());
        assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn delta_reports_carry_exact_fractions() {
    for (file, frac) in [
        ("delta_c2.json", "1/2"),
        ("delta_m2.json", "3/4"),
        ("delta_c_m2.json", "7/9"),
    ] {
        let report = json(&freedim(&["delta", "--config", &config(file)]));
        assert_eq!(report["Delta_fraction"], frac, "{file}");
        assert_eq!(report["agreement"]["h0_equals_h2"], true);
        assert_eq!(report["pinned"]["delta_star"], report["Delta"]);
    }
}

#[test]
fn group_free_kernel_matches_nielsen_schreier() {
    let report = json(&freedim(&[
        "group_free",
        "--config",
        &config("group_free.json"),
    ]));
    assert_eq!(report["delta"], 2.0);
    assert_eq!(report["kernel"]["index"], 2);
    assert_eq!(report["kernel"]["rank"], 3);
    assert_eq!(report["kernel"]["kernel_verified"], true);
    assert_eq!(report["kernel_delta"], 3.0);
}

#[test]
fn counterexample_text_has_the_verdict() {
    let out = freedim(&[
        "counterexample",
        "--config",
        &config("counterexample.json"),
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("liminf delta = 2 < 3 = delta(limit)"));
    assert!(text.contains("v u^-1 = v^2 (uv)^-1 [ok]"));
}

#[test]
fn csv_is_the_cutoff_sweep_only() {
    let out = freedim(&[
        "cutoff",
        "--config",
        &config("cutoff_random.json"),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("R,hs_error"));
    assert_eq!(lines.count(), 8);

    let out = freedim(&[
        "delta",
        "--config",
        &config("delta_m2.json"),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_problems_exit_with_two() {
    let missing = freedim(&["delta", "--config", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let wrong = freedim(&["delta", "--config", &config("counterexample.json")]);
    assert_eq!(wrong.status.code(), Some(2));
    let unknown = freedim(&["nonsense", "--config", &config("counterexample.json")]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(missing.stdout.is_empty());
}

#[test]
fn computation_failures_exit_with_one() {
    let dir = std::env::temp_dir().join(format!("freedim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // ℂ² with a scalar generator does not generate
    let path = dir.join("not_generating.json");
    std::fs::write(
        &path,
        r#"{"algebra": {"blocks": [1, 1], "weights": [0.5, 0.5], "generators": [[[[[1, 0]]], [[[1, 0]]]]]}}"#,
    )
    .unwrap();
    let out = freedim(&["delta", "--config", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tolerance_env_overrides_the_residual_threshold() {
    let out = Command::new(env!("CARGO_BIN_EXE_freedim"))
        .args(["delta", "--config", &config("delta_m2.json")])
        .env("FREEDIM_TOL", "1e-6")
        .output()
        .unwrap();
    let report = json(&out);
    assert_eq!(report["tolerances"]["residual"], 1e-6);

    let bad = Command::new(env!("CARGO_BIN_EXE_freedim"))
        .args(["delta", "--config", &config("delta_m2.json")])
        .env("FREEDIM_TOL", "tiny")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_file_is_complete_and_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("freedim-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("report.json");
    let out = freedim(&[
        "group_finite",
        "--config",
        &config("group_finite_s3.json"),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&target).unwrap();
    let direct = freedim(&["group_finite", "--config", &config("group_finite_s3.json")]);
    assert_eq!(written, direct.stdout);
    let leftovers: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(leftovers.len(), 1, "temporary file left behind");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seed_flag_overrides_the_config_seed() {
    let a = json(&freedim(&[
        "dual_system",
        "--config",
        &config("dual_system_inner.json"),
        "--seed",
        "1",
    ]));
    let b = json(&freedim(&[
        "dual_system",
        "--config",
        &config("dual_system_inner.json"),
        "--seed",
        "2",
    ]));
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
    assert_ne!(a["instances"], b["instances"]);
    assert_eq!(a["config_hash"], b["config_hash"]);
}

#[test]
fn verbose_timing_goes_to_stderr_only() {
    let quiet = freedim(&["delta", "--config", &config("delta_c2.json")]);
    let loud = freedim(&["delta", "--config", &config("delta_c2.json"), "--verbose"]);
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(String::from_utf8_lossy(&loud.stderr).contains(" s"));
}
