use std::fs;
use std::path::Path;
use std::process::Command;

use fclt::cadlag::StepPath;
use fclt::harness::{
    read_rows, run, run_config, ExperimentConfig, RunOptions, CSV_HEADER, EXIT_CONFIG, EXIT_CRITERION, EXIT_OK,
};

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p
}

fn opts(out: &Path, workers: usize) -> RunOptions {
    RunOptions { out: Some(out.to_path_buf()), workers: Some(workers), dump_paths: false }
}

const SMALL_GAP: &str = r#"{
    "experiment": "truncation_gap",
    "coefficients": {"kind": "geometric", "c": 1.0, "rho": 0.5},
    "n_values": [200, 400],
    "m_values": [1, 2, 8],
    "replicas": 60,
    "seed": 5
}"#;

#[test]
fn csv_is_identical_across_worker_counts_and_reruns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_GAP);
    let mut outputs = Vec::new();
    for (i, workers) in [1, 3, 3].into_iter().enumerate() {
        let out = tmp.path().join(format!("out{i}"));
        let r = run(&cfg, &opts(&out, workers));
        assert_eq!(r.exit_code, EXIT_OK, "{}", r.message);
        outputs.push(fs::read(out.join("truncation_gap.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let rows = read_rows(&outputs[0][..]).unwrap();
    assert!(rows.iter().all(|r| r.replicas == 60 && r.seed == 5 && r.mc_se.is_finite()));
}

#[test]
fn adding_replicas_leaves_earlier_replicas_unchanged() {
    let tmp = tempfile::tempdir().unwrap();
    let base = r#"{"experiment": "j1_vs_m1", "coefficients": {"kind": "finite_list", "first_index": 0, "values": [0.5, 0.5]},
        "model": {"kind": "pareto", "alpha": 1.2}, "n_values": [300], "seed": 9, "replicas": REPS}"#;
    let mut dumps = Vec::new();
    for reps in [3, 7] {
        let cfg = ExperimentConfig::from_json(&base.replace("REPS", &reps.to_string())).unwrap();
        let out = tmp.path().join(format!("r{reps}"));
        let r = run_config(&cfg, &RunOptions { out: Some(out.clone()), workers: Some(2), dump_paths: true });
        assert!(r.exit_code == EXIT_OK || r.exit_code == EXIT_CRITERION, "{}", r.message);
        dumps.push(out.join("paths"));
    }
    for i in 0..3 {
        let name = format!("j1_vs_m1_n300_phenomenon_r{i}.csv");
        let a = fs::read(dumps[0].join(&name)).unwrap();
        assert_eq!(a, fs::read(dumps[1].join(&name)).unwrap());
        let p = StepPath::read_csv(&a[..]).unwrap();
        assert_eq!(p.horizon(), 1.0);
    }
    assert!(dumps[1].join("j1_vs_m1_n300_control_r6.csv").exists());
}

#[test]
fn config_errors_write_nothing() {
    let bad = [
        "{ not json",
        r#"{"experiment": "truncation_gap", "m_values": [1], "unknown_key": 1}"#,
        r#"{"experiment": "no_such_experiment"}"#,
        r#"{"experiment": "truncation_gap", "m_values": [1], "thresholds": {"ks_max": 0.1}}"#,
        r#"{"experiment": "maximal_inequality", "model": {"kind": "pareto", "alpha": 0.4}, "tau": 0.5, "replicas": 3}"#,
        r#"{"experiment": "truncation_gap", "m_values": [4, 2]}"#,
    ];
    for text in bad {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write_config(tmp.path(), text);
        let out = tmp.path().join("out");
        let r = run(&cfg, &opts(&out, 1));
        assert_eq!(r.exit_code, EXIT_CONFIG, "{text}: {}", r.message);
        assert!(!out.exists(), "{text} left files behind");
    }
}

#[test]
fn zero_replicas_is_an_empty_success() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"experiment": "marginal_convergence", "replicas": 0}"#);
    let out = tmp.path().join("out");
    let r = run(&cfg, &opts(&out, 1));
    assert_eq!(r.exit_code, EXIT_OK);
    let csv = fs::read_to_string(out.join("marginal_convergence.csv")).unwrap();
    assert_eq!(csv.trim_end(), CSV_HEADER);
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["notes"][0], "no replicas");
    assert_eq!(summary["all_passed"], true);
    assert_eq!(summary["config"]["experiment"], "marginal_convergence");
    assert!(summary["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn failed_criterion_sets_exit_code() {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "j1_vs_m1", "n_values": [200], "replicas": 5, "thresholds": {"control_split_max": -1.0}}"#,
    )
    .unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let r = run_config(&cfg, &opts(tmp.path(), 1));
    assert_eq!(r.exit_code, EXIT_CRITERION, "{}", r.message);
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["all_passed"], false);
}

#[test]
fn anticluster_iid_matches_analytic() {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "anticluster", "n_values": [500], "epsilon": 0.5, "replicas": 400, "seed": 3}"#,
    )
    .unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let r = run_config(&cfg, &opts(tmp.path(), 2));
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.message);
    let out = r.output.unwrap();
    let p = out.row(500, -1, "conditional_prob").unwrap();
    let a = out.row(500, -1, "iid_analytic").unwrap();
    assert!((p.value - a.value).abs() <= 3.0 * p.mc_se);
}

#[test]
fn condition_abi_stays_under_doob_bound() {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "condition_abi", "n_values": [200, 800], "replicas": 300, "seed": 1}"#,
    )
    .unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let r = run_config(&cfg, &opts(tmp.path(), 2));
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.message);
    assert!(r.output.unwrap().criteria.iter().any(|c| c.name.starts_with("doob_bound")));
}

#[test]
fn cli_list_selftest_and_config_error() {
    let exe = env!("CARGO_BIN_EXE_fclt");
    let list = Command::new(exe).arg("list").output().unwrap();
    assert!(list.status.success());
    let text = String::from_utf8(list.stdout).unwrap();
    for name in ["marginal_convergence", "j1_vs_m1", "truncation_gap", "anticluster", "\"properties\""] {
        assert!(text.contains(name), "missing {name}");
    }
    let st = Command::new(exe).arg("selftest").output().unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stdout));

    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[1, 2");
    let out = tmp.path().join("out");
    let res = Command::new(exe)
        .args(["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&res.stderr).contains("config error"));
    assert!(!out.exists());
}
