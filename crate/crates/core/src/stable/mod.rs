//! α-stable laws in the `S_α(σ, β, μ)` ("type 1") parametrization:
//! sampling, CDF evaluation, Lévy-process paths and KS comparisons.
//!
//! The characteristic function is
//! `exp(iμθ − σ^α|θ|^α (1 − iβ sign(θ) tan(πα/2)))` for `α ≠ 1` and
//! `exp(iμθ − σ|θ| (1 + iβ (2/π) sign(θ) ln|θ|))` for `α = 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::cadlag::StepPath;
use crate::error::{invalid, Result};
use crate::rng::CounterRng;

mod cdf;
mod ks;

pub use cdf::{stable_cdf, stable_cdf_batch, CdfTable};
pub use ks::{ks_against_stable, ks_statistic, ks_statistic_pruned, ks_two_sample, KsResult};

/// Random stream reserved for stable draws.
const STABLE_STREAM: u64 = 0x57ab1e;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
    scale: f64,
    location: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, scale: f64, location: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return invalid(format!("alpha must lie in (0, 2], got {alpha}"));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return invalid(format!("beta must lie in [-1, 1], got {beta}"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return invalid(format!("scale must be positive, got {scale}"));
        }
        if !location.is_finite() {
            return invalid("location must be finite");
        }
        Ok(Self { alpha, beta, scale, location })
    }

    pub fn standard(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.alpha, self.beta, self.scale, self.location).map(|_| ())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    /// Law of the increment over a time step `h` of the Lévy process whose
    /// value at time 1 has this law.
    pub fn increment(&self, h: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.scale * h.powf(1.0 / self.alpha), self.location * h)
    }

    /// Chambers–Mallows–Stuck transform of `V` uniform on `(−π/2, π/2)` and
    /// `W` standard exponential.
    pub fn transform(&self, v: f64, w: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if a == 1.0 {
            let t = FRAC_PI_2 + b * v;
            let x = (t * v.tan() - b * (FRAC_PI_2 * w * v.cos() / t).ln()) / FRAC_PI_2;
            self.scale * x + b * self.scale * self.scale.ln() / FRAC_PI_2 + self.location
        } else {
            let tan = (PI * a / 2.0).tan();
            let b_shift = (b * tan).atan() / a;
            let s = (1.0 + b * b * tan * tan).powf(1.0 / (2.0 * a));
            let x = s * (a * (v + b_shift)).sin() / v.cos().powf(1.0 / a)
                * ((v - a * (v + b_shift)).cos() / w).powf((1.0 - a) / a);
            self.scale * x + self.location
        }
    }

    fn draw(&self, rng: &CounterRng, index: i64) -> f64 {
        let v = PI * (rng.uniform_at(index, 0) - 0.5);
        let w = -rng.uniform_at(index, 1).ln();
        self.transform(v, w)
    }
}

/// `count` iid draws; draw `i` depends only on `(seed, i)`.
pub fn sample_stable(params: &StableParams, count: usize, seed: u64) -> Vec<f64> {
    let rng = CounterRng::new(seed, STABLE_STREAM);
    (0..count).map(|i| params.draw(&rng, i as i64)).collect()
}

/// Lévy process path on `[0, T]` with iid increments at the grid times
/// `i T / n_grid`. The increments are `sample_stable(params.increment(T / n_grid), n_grid, seed)`.
pub fn levy_path(params: &StableParams, n_grid: usize, horizon: f64, seed: u64) -> Result<StepPath> {
    if n_grid == 0 {
        return invalid("n_grid must be at least 1");
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return invalid(format!("horizon must be positive, got {horizon}"));
    }
    let inc = params.increment(horizon / n_grid as f64)?;
    let sizes = sample_stable(&inc, n_grid, seed);
    let jumps = sizes
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let t = if i + 1 == n_grid { horizon } else { (i + 1) as f64 * horizon / n_grid as f64 };
            (t, s)
        })
        .collect();
    StepPath::new(horizon, 0.0, jumps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quantile(mut v: Vec<f64>, p: f64) -> f64 {
        v.sort_by(f64::total_cmp);
        v[((v.len() as f64 - 1.0) * p).round() as usize]
    }

    #[test]
    fn validation() {
        assert!(StableParams::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(2.1, 0.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 1.5, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 0.0, 0.0, 0.0).is_err());
        assert!(sample_stable(&StableParams::standard(1.5, 0.0).unwrap(), 0, 1).is_empty());
    }

    #[test]
    fn cauchy_quartiles() {
        let s = sample_stable(&StableParams::standard(1.0, 0.0).unwrap(), 100_000, 3);
        let med = quantile(s.clone(), 0.5);
        let iqr = quantile(s.clone(), 0.75) - quantile(s, 0.25);
        assert!(med.abs() < 0.05, "{med}");
        assert!((iqr - 2.0).abs() < 0.1, "{iqr}");
    }

    #[test]
    fn gaussian_variance() {
        let s = sample_stable(&StableParams::standard(2.0, 0.3).unwrap(), 100_000, 4);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (s.len() - 1) as f64;
        assert!((var / 2.0 - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn levy_path_uses_sampler_increments() {
        let p = StableParams::new(1.3, 0.4, 2.0, 0.5).unwrap();
        let path = levy_path(&p, 8, 2.0, 11).unwrap();
        let inc = sample_stable(&p.increment(0.25).unwrap(), 8, 11);
        assert_eq!(path.jump_sizes(), &inc[..]);
        assert_eq!(*path.jump_times().last().unwrap(), 2.0);
        assert!(levy_path(&p, 0, 1.0, 1).is_err());
    }
}
