//! Config-driven Monte Carlo experiments, result persistence and the CLI
//! entry points.
//!
//! Replica `i` of an arm draws its innovations from
//! `replica_seed(arm_seed(seed, arm), i)`, so results do not depend on the
//! worker count and adding replicas leaves earlier replicas unchanged.
//! Different `n` reuse the same replica seeds (common random numbers).

use serde::Serialize;

use crate::cadlag::StepPath;
use crate::error::Result;

mod config;
mod experiments;
mod report;
mod run;
mod selftest;

pub use config::{DependenceConfig, ExperimentConfig, ModelSpec, CONFIG_SCHEMA};
pub use report::{read_rows, write_rows, Summary, CSV_HEADER};
pub use run::{run, run_config, RunOptions, RunOutcome, EXIT_CONFIG, EXIT_CRASH, EXIT_CRITERION, EXIT_OK};
pub use selftest::{selftest, SelftestCheck};

/// Registered experiment with the threshold keys it accepts.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub thresholds: &'static [&'static str],
    pub monte_carlo: bool,
}

pub const EXPERIMENTS: &[ExperimentSpec] = &[
    ExperimentSpec {
        name: "marginal_convergence",
        description: "two-sample KS between X_n(1)/A of the linear process and the iid partial-sum oracle",
        thresholds: &["ks_max", "se_k"],
        monte_carlo: true,
    },
    ExperimentSpec {
        name: "j1_vs_m1",
        description: "split-jump statistic and J1/M1 moduli of X_n for the configured filter vs the identity filter",
        thresholds: &["phenomenon_split_min", "phenomenon_j1_min", "phenomenon_m1_max", "control_split_max"],
        monte_carlo: true,
    },
    ExperimentSpec {
        name: "truncation_gap",
        description: "Pr(sup|X_n − X_n^(m)| > delta) for coupled full and truncated paths",
        thresholds: &["max_prob_at_largest_m", "se_k"],
        monte_carlo: true,
    },
    ExperimentSpec {
        name: "maximal_inequality",
        description: "maximal partial sums of truncated centered innovations vs the Kounias moment bound",
        thresholds: &["se_k"],
        monte_carlo: true,
    },
    ExperimentSpec {
        name: "condition_abi",
        description: "E max_l |b_n^{-1} Σ_{j≤l} (ξ_j I(|ξ_j| ≤ b_n) − c_n)|^s across n, with the Doob bound at s = 2",
        thresholds: &["se_k", "doob_margin", "growth_tol"],
        monte_carlo: true,
    },
    ExperimentSpec {
        name: "anticluster",
        description: "Pr(max_{2≤j≤r_n} |ξ_j| > ε b_n | |ξ_1| > ε b_n) by a ratio estimator over exceedance anchors",
        thresholds: &["se_k", "min_events"],
        monte_carlo: true,
    },
    ExperimentSpec {
        name: "addition_continuity",
        description: "M1/J1 distances of sums along same-sign, opposite-sign and disjoint-jump path families",
        thresholds: &[],
        monte_carlo: false,
    },
];

pub fn experiment_spec(name: &str) -> Option<&'static ExperimentSpec> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

/// One CSV result row. `m = −1` when the row has no `m`.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    pub n: u64,
    pub m: i64,
    pub statistic: String,
    pub value: f64,
    pub mc_se: f64,
    pub replicas: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub rows: Vec<ReportRow>,
    pub criteria: Vec<Criterion>,
    pub notes: Vec<String>,
    /// `(file stem, path)` for the first replicas, filled when requested.
    pub paths: Vec<(String, StepPath)>,
}

impl ExperimentOutput {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn row(&self, n: u64, m: i64, statistic: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.n == n && r.m == m && r.statistic == statistic)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

/// Run the configured experiment on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig, dump_paths: bool) -> Result<ExperimentOutput> {
    cfg.validate()?;
    experiments::dispatch(cfg, dump_paths)
}
