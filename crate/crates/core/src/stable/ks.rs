//! Kolmogorov–Smirnov statistics.

use super::{stable_cdf, StableParams};
use crate::error::{invalid, Result};

fn sorted(sample: &[f64], what: &str) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return invalid(format!("{what} sample is empty"));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return invalid(format!("{what} sample contains NaN"));
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup_x |F_n(x) − F(x)|`, evaluating `cdf` at every sample point.
pub fn ks_statistic<F: FnMut(f64) -> f64>(sample: &[f64], mut cdf: F) -> Result<f64> {
    let xs = sorted(sample, "KS")?;
    let n = xs.len() as f64;
    Ok(xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i + 1) as f64 / n - f).max(f - i as f64 / n)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub cdf_evaluations: usize,
}

/// One-sample KS statistic for an expensive nondecreasing `cdf`.
///
/// Blocks of consecutive order statistics are bounded using the CDF values
/// at their ends, and a block is only opened when its bound could exceed
/// the best discrepancy found so far. The result equals [`ks_statistic`] for
/// any nondecreasing `cdf`.
pub fn ks_statistic_pruned<F: FnMut(f64) -> Result<f64>>(sample: &[f64], mut cdf: F) -> Result<KsResult> {
    let xs = sorted(sample, "KS")?;
    let len = xs.len();
    let n = len as f64;
    let mut values: Vec<Option<f64>> = vec![None; len];
    let mut evaluations = 0usize;
    let mut eval = |i: usize, values: &mut Vec<Option<f64>>| -> Result<f64> {
        if let Some(v) = values[i] {
            return Ok(v);
        }
        let v = cdf(xs[i])?;
        evaluations += 1;
        values[i] = Some(v);
        Ok(v)
    };
    let point = |i: usize, f: f64| ((i + 1) as f64 / n - f).max(f - i as f64 / n);

    // Coarse pass to seed a good incumbent.
    let coarse = 64.min(len);
    let mut anchors: Vec<usize> = (0..coarse).map(|k| k * (len - 1) / (coarse - 1).max(1)).collect();
    anchors.dedup();
    let mut best = 0.0f64;
    for &i in &anchors {
        let f = eval(i, &mut values)?;
        best = best.max(point(i, f));
    }
    let mut stack: Vec<(usize, usize)> = anchors.windows(2).map(|w| (w[0], w[1])).collect();
    while let Some((l, r)) = stack.pop() {
        if r <= l + 1 {
            continue;
        }
        let (fl, fr) = (eval(l, &mut values)?, eval(r, &mut values)?);
        // Interior i in (l, r) has F(x_i) in [fl, fr].
        let bound = (r as f64 / n - fl).max(fr - (l + 1) as f64 / n);
        if bound <= best {
            continue;
        }
        let mid = l + (r - l) / 2;
        let fm = eval(mid, &mut values)?;
        best = best.max(point(mid, fm));
        stack.push((l, mid));
        stack.push((mid, r));
    }
    Ok(KsResult { statistic: best, cdf_evaluations: evaluations })
}

/// One-sample KS statistic against a stable law.
pub fn ks_against_stable(sample: &[f64], params: &StableParams) -> Result<KsResult> {
    ks_statistic_pruned(sample, |x| stable_cdf(params, x))
}

/// `sup_x |F_a(x) − F_b(x)|` for the two empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a, "first")?;
    let b = sorted(b, "second")?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}
