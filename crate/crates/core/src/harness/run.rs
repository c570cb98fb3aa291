use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::report::write_outputs;
use super::{run_experiment, ExperimentConfig, ExperimentOutput};
use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CRASH: i32 = 3;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Output directory; overrides `output_dir` from the config.
    pub out: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
    pub dump_paths: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    /// Directory holding the outputs, when any were written.
    pub out_dir: Option<PathBuf>,
    pub output: Option<ExperimentOutput>,
    pub message: String,
}

impl RunOutcome {
    fn failed(exit_code: i32, message: String) -> Self {
        Self { exit_code, out_dir: None, output: None, message }
    }
}

/// Parse the config at `config_path` and run it. Nothing is written when the
/// config fails to parse or validate.
pub fn run(config_path: &Path, opts: &RunOptions) -> RunOutcome {
    match ExperimentConfig::from_path(config_path) {
        Ok(cfg) => run_config(&cfg, opts),
        Err(e) => RunOutcome::failed(EXIT_CONFIG, e.to_string()),
    }
}

pub fn run_config(cfg: &ExperimentConfig, opts: &RunOptions) -> RunOutcome {
    if let Err(e) = cfg.validate() {
        return RunOutcome::failed(EXIT_CONFIG, e.to_string());
    }
    if opts.workers == Some(0) {
        return RunOutcome::failed(EXIT_CONFIG, "workers must be at least 1".into());
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return RunOutcome::failed(EXIT_CRASH, format!("cannot start worker pool: {e}")),
    };
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| pool.install(|| run_experiment(cfg, opts.dump_paths))));
    let seconds = start.elapsed().as_secs_f64();
    let output = match result {
        Ok(Ok(out)) => out,
        Ok(Err(e @ Error::Config(_))) => return RunOutcome::failed(EXIT_CONFIG, e.to_string()),
        Ok(Err(e)) => return RunOutcome::failed(EXIT_CRASH, e.to_string()),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            return RunOutcome::failed(EXIT_CRASH, format!("experiment panicked: {msg}"));
        }
    };
    let dir = opts
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results").join(&cfg.experiment));
    if let Err(e) = write_outputs(&dir, cfg, &output, seconds) {
        return RunOutcome::failed(EXIT_CRASH, format!("cannot write outputs to {}: {e}", dir.display()));
    }
    let failed: Vec<&str> = output.criteria.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let (exit_code, message) = if failed.is_empty() {
        (EXIT_OK, format!("{}: {} criteria passed", cfg.experiment, output.criteria.len()))
    } else {
        (EXIT_CRITERION, format!("{}: failed {}", cfg.experiment, failed.join(", ")))
    };
    RunOutcome { exit_code, out_dir: Some(dir), output: Some(output), message }
}
