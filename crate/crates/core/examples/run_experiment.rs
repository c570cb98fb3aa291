//! Run a registered experiment from an inline config and print its rows and
//! criteria. The CLI equivalent is `fclt run --config <file>`.

use fclt::harness::{run_config, write_rows, ExperimentConfig, RunOptions};

const CONFIG: &str = r#"{
    "experiment": "truncation_gap",
    "model": {"kind": "pareto", "alpha": 1.5},
    "coefficients": {"kind": "geometric", "c": 1.0, "rho": 0.5},
    "n_values": [2000],
    "m_values": [1, 2, 4, 8, 16, 32],
    "delta": 0.1,
    "replicas": 200,
    "seed": 3
}"#;

fn main() -> fclt::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let out = std::env::temp_dir().join("fclt_run_experiment");
    let outcome = run_config(&cfg, &RunOptions { out: Some(out.clone()), workers: None, dump_paths: false });
    println!("exit code {}: {}", outcome.exit_code, outcome.message);
    if let Some(result) = outcome.output {
        write_rows(&result.rows, std::io::stdout())?;
        for c in &result.criteria {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }
    println!("outputs written to {}", out.display());
    Ok(())
}
