//! Normalizing sequences `b_n`, `c_n`, centering constants and the
//! regular-variation diagnostics built on them.

use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::innovations::{InnovationModel, Marginal, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSeq {
    pub n: u64,
    pub b_n: f64,
    pub c_n: f64,
    pub mode: NormalizationMode,
    /// Law centering `c` (0 for α < 1, `E ξ` for α > 1), when defined.
    pub c: Option<f64>,
    /// `n b_n^{-1} (c_n − c)` at this `n`.
    pub c_tilde: Option<f64>,
}

impl NormalizationSeq {
    pub fn analytic(model: &InnovationModel, n: u64) -> Result<Self> {
        let b_n = bn_analytic(model, n);
        let c_n = cn_analytic(model, n)?;
        let (c, c_tilde) = match centering_constants(model, n) {
            Ok((c, ct)) => (Some(c), Some(ct)),
            Err(Error::Unsupported(_)) => (None, None),
            Err(e) => return Err(e),
        };
        Ok(Self { n, b_n, c_n, mode: NormalizationMode::Analytic, c, c_tilde })
    }

    /// Plug-in version: empirical quantile of `|sample|` and empirical truncated mean.
    pub fn empirical(sample: &[f64], n: u64) -> Result<Self> {
        let b_n = bn_empirical(sample, n)?;
        let c_n = sample.iter().filter(|x| x.abs() <= b_n).sum::<f64>() / sample.len() as f64;
        Ok(Self { n, b_n, c_n, mode: NormalizationMode::Empirical, c: None, c_tilde: None })
    }
}

/// `b_n = inf{x : Pr(|ξ_1| ≤ x) ≥ 1 − 1/n}`. Returns 0 for `n ≤ 1`.
pub fn bn_analytic(model: &InnovationModel, n: u64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let level = 1.0 / n as f64;
    match model.marginal() {
        Marginal::Constant(c) => c.abs(),
        Marginal::Pareto(d) if model.dependence() == &crate::innovations::DependenceSpec::Iid => {
            d.scale() * (n as f64).powf(1.0 / d.alpha())
        }
        Marginal::Pareto(_) => {
            // mixture tail: continuous and strictly decreasing once below 1
            let mut lo = model.support_floor();
            let mut hi = lo.max(1.0);
            while model.tail_prob_unchecked(hi) > level {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if model.tail_prob_unchecked(mid) > level {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi
        }
    }
}

/// The `(1 − 1/n)` empirical quantile of `|sample|`: the smallest order
/// statistic whose empirical CDF reaches the level.
pub fn bn_empirical(sample: &[f64], n: u64) -> Result<f64> {
    if sample.is_empty() {
        return invalid("bn_empirical needs a nonempty sample");
    }
    if n < 2 {
        return invalid(format!("bn_empirical needs n >= 2, got {n}"));
    }
    let len = sample.len() as u128;
    let n128 = n as u128;
    // smallest rank i with i/len >= (n-1)/n
    let rank = (len * (n128 - 1)).div_ceil(n128).max(1) as usize;
    let mut abs: Vec<f64> = sample.iter().map(|x| x.abs()).collect();
    let (_, kth, _) = abs.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(*kth)
}

/// `c_n = E(ξ_1 I(|ξ_1| ≤ b_n))`.
pub fn cn_analytic(model: &InnovationModel, n: u64) -> Result<f64> {
    if n < 2 {
        return invalid(format!("cn_analytic needs n >= 2, got {n}"));
    }
    let b = bn_analytic(model, n);
    if b == 0.0 {
        return Ok(0.0);
    }
    model.truncated_mean(b)
}

/// `(c, n b_n^{-1}(c_n − c))` with `c = 0` for α < 1 and `c = E ξ_1` for α > 1.
pub fn centering_constants(model: &InnovationModel, n: u64) -> Result<(f64, f64)> {
    let alpha = model
        .alpha()
        .ok_or_else(|| Error::Unsupported("centering constants need a tail index".into()))?;
    if alpha == 1.0 {
        return Err(Error::Unsupported("centering constants are not defined for alpha = 1".into()));
    }
    let c = if alpha < 1.0 { 0.0 } else { model.mean().unwrap_or(0.0) };
    let b_n = bn_analytic(model, n);
    let c_n = cn_analytic(model, n)?;
    Ok((c, n as f64 * (c_n - c) / b_n))
}

/// `x^{2−β} E(|ξ|^β I(|ξ| > x)) / E(ξ² I(|ξ| ≤ x))`, which tends to `(2−α)/(α−β)`.
pub fn karamata_ratio(model: &InnovationModel, beta: f64, x: f64) -> Result<f64> {
    let alpha = model
        .alpha()
        .ok_or_else(|| Error::Unsupported("karamata_ratio needs a Pareto marginal".into()))?;
    if beta >= alpha {
        return invalid(format!("karamata_ratio needs beta < alpha, got beta = {beta}, alpha = {alpha}"));
    }
    if !(x > model.support_floor()) {
        return invalid(format!("karamata_ratio needs x above the support floor, got {x}"));
    }
    let above = model.truncated_abs_moment(beta, x, Side::Above)?;
    let second = model.truncated_second_moment(x)?;
    Ok(x.powf(2.0 - beta) * above / second)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRow {
    pub n: u64,
    pub b_n: f64,
    pub c_n: f64,
    pub c_n_over_b_n: f64,
    pub second_moment_ratio: f64,
}

impl ConditionRow {
    /// `n b_n^{-1} c_n`, bounded when α < 1 and the truncated mean grows like `b_n / n`.
    pub fn n_cn_over_bn(&self) -> f64 {
        self.n as f64 * self.c_n_over_b_n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub rows: Vec<ConditionRow>,
    pub b_n_increasing: bool,
    pub cn_over_bn_decreasing: bool,
    pub max_second_moment_ratio: f64,
}

impl ConditionReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Finite-`n` diagnostics for `b_n → ∞`, `c_n / b_n → 0` and boundedness of
/// `n b_n^{-2} E(ξ² I(|ξ| ≤ b_n))`.
pub fn check_conditions_abn(model: &InnovationModel, n_list: &[u64]) -> Result<ConditionReport> {
    if n_list.is_empty() {
        return invalid("n_list must be nonempty");
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let b_n = bn_analytic(model, n);
        let c_n = cn_analytic(model, n)?;
        let second = model.truncated_second_moment(b_n)?;
        rows.push(ConditionRow {
            n,
            b_n,
            c_n,
            c_n_over_b_n: c_n / b_n,
            second_moment_ratio: n as f64 * second / (b_n * b_n),
        });
    }
    let b_n_increasing = rows.windows(2).all(|w| w[1].b_n > w[0].b_n);
    let cn_over_bn_decreasing =
        rows.windows(2).all(|w| w[1].c_n_over_b_n.abs() <= w[0].c_n_over_b_n.abs());
    let max_second_moment_ratio = rows.iter().map(|r| r.second_moment_ratio).fold(f64::MIN, f64::max);
    Ok(ConditionReport { rows, b_n_increasing, cn_over_bn_decreasing, max_second_moment_ratio })
}

/// Hill tail-index estimate from the `k + 1` largest `|x|`:
/// `1 / ((1/k) Σ_{i<k} ln(X_(i) / X_(k)))` with `X_(0) ≥ X_(1) ≥ ...`.
pub fn hill_alpha(sample: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k >= sample.len() {
        return invalid(format!("hill_alpha needs 1 <= k < {}, got {k}", sample.len()));
    }
    let mut abs: Vec<f64> = sample.iter().map(|x| x.abs()).filter(|&x| x > 0.0).collect();
    if abs.len() < k + 1 {
        return invalid(format!("hill_alpha needs at least {} nonzero values", k + 1));
    }
    abs.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let threshold = abs[k];
    let mean_excess = abs[..k].iter().map(|x| (x / threshold).ln()).sum::<f64>() / k as f64;
    if mean_excess <= 0.0 {
        return Err(Error::Numeric("hill_alpha: top order statistics are tied".into()));
    }
    Ok(1.0 / mean_excess)
}
