//! Deterministic checks runnable without Monte Carlo budgets.

use serde::Serialize;

use super::{run_experiment, ExperimentConfig};
use crate::cadlag::{j1_distance, m1_distance, StepPath};
use crate::error::Result;
use crate::innovations::{DistributionSpec, InnovationModel};
use crate::linproc::shift_check;
use crate::normalize::{bn_analytic, cn_analytic, karamata_ratio};
use crate::stable::{stable_cdf, StableParams};

#[derive(Debug, Clone, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("truncated_second_moment_constant", truncated_moment_constant),
    ("karamata_ratio", karamata),
    ("split_jump_pair", split_jump_pair),
    ("addition_continuity", addition_continuity),
    ("cauchy_cdf", cauchy_cdf),
    ("levy_cdf", levy_cdf),
    ("shift_bound", shift_bound),
    ("zero_replicas", zero_replicas),
];

/// Runs every deterministic check. Errors count as failures.
pub fn selftest() -> Vec<SelftestCheck> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok((passed, detail)) => SelftestCheck { name, passed, detail },
            Err(e) => SelftestCheck { name, passed: false, detail: format!("error: {e}") },
        })
        .collect()
}

fn pareto(alpha: f64) -> Result<InnovationModel> {
    Ok(InnovationModel::iid(DistributionSpec::symmetric(alpha)?))
}

fn truncated_moment_constant() -> Result<(bool, String)> {
    let model = pareto(1.5)?;
    let n = 1_000_000u64;
    let b = bn_analytic(&model, n);
    let v = n as f64 * model.truncated_second_moment(b)? / (b * b);
    let closed = 3.0 * (1.0 - (n as f64).powf(-1.0 / 3.0));
    let ok = (v - closed).abs() <= 1e-9 && (v / 3.0 - 1.0).abs() <= 0.02;
    Ok((ok, format!("n b_n^-2 E(ξ² I) = {v:.12}, closed form {closed:.12}")))
}

fn karamata() -> Result<(bool, String)> {
    let model = pareto(1.5)?;
    let r4 = karamata_ratio(&model, 1.0, 1e4)?;
    let r8 = karamata_ratio(&model, 1.0, 1e8)?;
    let ok = (r4 - 100.0 / 99.0).abs() <= 1e-9 && (r8 - 1.0).abs() <= 1.1e-4;
    Ok((ok, format!("ratio(1e4) = {r4:.12}, ratio(1e8) = {r8:.8}")))
}

fn split_jump_pair() -> Result<(bool, String)> {
    let x = StepPath::new(1.0, 0.0, vec![(0.5, 1.0)])?;
    let y = StepPath::new(1.0, 0.0, vec![(0.5, 0.5), (0.501, 0.5)])?;
    let j1 = j1_distance(&x, &y)?;
    let m1 = m1_distance(&x, &y, 1e-4)?;
    let ok = (j1 - 0.5).abs() <= 1e-6 && m1 <= 1.2e-3;
    Ok((ok, format!("j1 = {j1:.9}, m1 = {m1:.6}")))
}

fn addition_continuity() -> Result<(bool, String)> {
    let cfg = ExperimentConfig::from_json(r#"{"experiment":"addition_continuity","n_values":[10,100,1000]}"#)?;
    let out = run_experiment(&cfg, false)?;
    let failed: Vec<&str> = out.criteria.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    Ok((failed.is_empty(), format!("{} criteria, failed: {failed:?}", out.criteria.len())))
}

fn cauchy_cdf() -> Result<(bool, String)> {
    let p = StableParams::standard(1.0, 0.0)?;
    let mut worst = 0.0f64;
    for x in [-2.0, -1.0, 0.0, 1.0, 2.0f64] {
        let exact = 0.5 + x.atan() / std::f64::consts::PI;
        worst = worst.max((stable_cdf(&p, x)? - exact).abs());
    }
    Ok((worst <= 1e-6, format!("largest error {worst:.3e}")))
}

fn levy_cdf() -> Result<(bool, String)> {
    // erfc(sqrt(1 / (2x)))
    const REFERENCE: [(f64, f64); 5] = [
        (0.5, 0.157_299_207_050_285_13),
        (1.0, 0.317_310_507_862_914_04),
        (2.0, 0.479_500_122_186_953_5),
        (4.0, 0.617_075_077_451_973_8),
        (10.0, 0.751_829_634_045_849_2),
    ];
    let p = StableParams::standard(0.5, 1.0)?;
    let mut worst = 0.0f64;
    for (x, exact) in REFERENCE {
        worst = worst.max((stable_cdf(&p, x)? - exact).abs());
    }
    Ok((worst <= 1e-5, format!("largest error {worst:.3e}")))
}

fn shift_bound() -> Result<(bool, String)> {
    let model = pareto(1.5)?;
    let n = 1000;
    let (b, c) = (bn_analytic(&model, n as u64), cn_analytic(&model, n as u64)?);
    let mut bad = 0;
    for k in [-3i64, 3] {
        for seed in 0..50 {
            bad += usize::from(!shift_check(&model, k, n, b, c, 1.0, seed)?.ok);
        }
    }
    Ok((bad == 0, format!("{bad} of 100 realizations violate lhs <= rhs")))
}

fn zero_replicas() -> Result<(bool, String)> {
    let cfg = ExperimentConfig::from_json(r#"{"experiment":"truncation_gap","m_values":[1,2],"replicas":0}"#)?;
    let out = run_experiment(&cfg, false)?;
    let ok = out.rows.is_empty() && out.notes.iter().any(|s| s == "no replicas");
    Ok((ok, format!("{} rows, notes {:?}", out.rows.len(), out.notes)))
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
