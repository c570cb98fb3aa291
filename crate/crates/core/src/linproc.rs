//! Two-sided linear processes `Z_j = Σ_k a_k ξ_{j−k}` and their normalized
//! partial-sum paths.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cadlag::{uniform_distance, StepPath};
use crate::error::{invalid, Error, Result};
use crate::innovations::InnovationModel;
use crate::special::hurwitz_zeta;

/// Upper limit for [`choose_truncation`] searches.
const MAX_TRUNCATION: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSeq {
    /// `a_{first_index + i} = values[i]`, zero elsewhere.
    FiniteList { first_index: i64, values: Vec<f64> },
    /// `a_k = c ρ^{|k|}`.
    Geometric { c: f64, rho: f64 },
    /// `a_k = c (1 + |k|)^{−β}`.
    Polynomial { c: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    AllNonnegative,
    Signed,
}

impl CoefficientSeq {
    /// The identity filter `a_0 = 1`.
    pub fn identity() -> Self {
        CoefficientSeq::FiniteList { first_index: 0, values: vec![1.0] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CoefficientSeq::FiniteList { first_index, values } => {
                if values.is_empty() {
                    return invalid("finite coefficient list is empty");
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return invalid("coefficients must be finite");
                }
                if first_index.checked_add(values.len() as i64).is_none() {
                    return invalid("coefficient indices overflow");
                }
            }
            CoefficientSeq::Geometric { c, rho } => {
                if !c.is_finite() {
                    return invalid("geometric c must be finite");
                }
                if !(*rho > 0.0 && *rho < 1.0) {
                    return invalid(format!("geometric rho must lie in (0, 1), got {rho}"));
                }
            }
            CoefficientSeq::Polynomial { c, beta } => {
                if !c.is_finite() {
                    return invalid("polynomial c must be finite");
                }
                if !(*beta > 0.0 && beta.is_finite()) {
                    return invalid(format!("polynomial beta must be positive, got {beta}"));
                }
            }
        }
        Ok(())
    }

    pub fn coefficient(&self, k: i64) -> f64 {
        match self {
            CoefficientSeq::FiniteList { first_index, values } => {
                let i = k - first_index;
                if i >= 0 && (i as usize) < values.len() {
                    values[i as usize]
                } else {
                    0.0
                }
            }
            CoefficientSeq::Geometric { c, rho } => c * rho.powi(k.unsigned_abs().min(i32::MAX as u64) as i32),
            CoefficientSeq::Polynomial { c, beta } => c * (1.0 + k.unsigned_abs() as f64).powf(-beta),
        }
    }

    /// Largest `|k|` with `a_k ≠ 0`, for finitely supported sequences.
    pub fn support_radius(&self) -> Option<u64> {
        match self {
            CoefficientSeq::FiniteList { first_index, values } => Some(
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(i, _)| (first_index + i as i64).unsigned_abs())
                    .max()
                    .unwrap_or(0),
            ),
            _ => None,
        }
    }

    pub fn sign_pattern(&self) -> SignPattern {
        let nonneg = match self {
            CoefficientSeq::FiniteList { values, .. } => values.iter().all(|&v| v >= 0.0),
            CoefficientSeq::Geometric { c, .. } | CoefficientSeq::Polynomial { c, .. } => *c >= 0.0,
        };
        if nonneg {
            SignPattern::AllNonnegative
        } else {
            SignPattern::Signed
        }
    }

    /// Pointwise coefficient sum, as a finite list over `|k| ≤ radius`.
    pub fn truncated_sum(&self, other: &CoefficientSeq, radius: u64) -> CoefficientSeq {
        let r = radius as i64;
        let values = (-r..=r).map(|k| self.coefficient(k) + other.coefficient(k)).collect();
        CoefficientSeq::FiniteList { first_index: -r, values }
    }

    /// Every coefficient multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> CoefficientSeq {
        match self {
            CoefficientSeq::FiniteList { first_index, values } => CoefficientSeq::FiniteList {
                first_index: *first_index,
                values: values.iter().map(|v| v * lambda).collect(),
            },
            CoefficientSeq::Geometric { c, rho } => CoefficientSeq::Geometric { c: c * lambda, rho: *rho },
            CoefficientSeq::Polynomial { c, beta } => CoefficientSeq::Polynomial { c: c * lambda, beta: *beta },
        }
    }
}

/// `Σ_{|k|>K} |a_k|^r`.
pub fn coeff_tail_mass(seq: &CoefficientSeq, r: f64, k: u64) -> Result<f64> {
    seq.validate()?;
    if !(r > 0.0 && r <= 1.0) {
        return invalid(format!("r must lie in (0, 1], got {r}"));
    }
    Ok(match seq {
        CoefficientSeq::FiniteList { first_index, values } => values
            .iter()
            .enumerate()
            .filter(|(i, _)| (first_index + *i as i64).unsigned_abs() > k)
            .map(|(_, v)| v.abs().powf(r))
            .sum(),
        CoefficientSeq::Geometric { c, rho } => {
            let q = rho.powf(r);
            2.0 * c.abs().powf(r) * q.powf(k as f64 + 1.0) / (1.0 - q)
        }
        CoefficientSeq::Polynomial { c, beta } => {
            let s = beta * r;
            if s <= 1.0 {
                return invalid(format!("Σ|a_k|^r diverges: beta * r = {s} <= 1"));
            }
            2.0 * c.abs().powf(r) * hurwitz_zeta(s, k as f64 + 2.0)
        }
    })
}

/// Smallest `K` with `coeff_tail_mass(seq, r, K) ≤ tol`.
pub fn choose_truncation(seq: &CoefficientSeq, r: f64, tol: f64) -> Result<u64> {
    if !(tol > 0.0) {
        return invalid(format!("tol must be positive, got {tol}"));
    }
    let fits = |k: u64| coeff_tail_mass(seq, r, k).map(|m| m <= tol);
    if fits(0)? {
        return Ok(0);
    }
    let mut hi = 1u64;
    while !fits(hi)? {
        if hi >= MAX_TRUNCATION {
            return Err(Error::Numeric(format!("no truncation below {MAX_TRUNCATION} reaches tol {tol}")));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: !fits(lo), fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `A_m = Σ_{|k|≤m} a_k`, or `A = Σ_k a_k` for `m = None`.
pub fn total_mass(seq: &CoefficientSeq, m: Option<u64>) -> Result<f64> {
    seq.validate()?;
    Ok(match (seq, m) {
        (CoefficientSeq::FiniteList { first_index, values }, _) => values
            .iter()
            .enumerate()
            .filter(|(i, _)| m.is_none_or(|m| (first_index + *i as i64).unsigned_abs() <= m))
            .map(|(_, v)| v)
            .sum(),
        (CoefficientSeq::Geometric { c, rho }, None) => c * (1.0 + rho) / (1.0 - rho),
        (CoefficientSeq::Geometric { c, rho }, Some(m)) => {
            c * (1.0 + 2.0 * rho * (1.0 - rho.powf(m as f64)) / (1.0 - rho))
        }
        (CoefficientSeq::Polynomial { c, beta }, None) => {
            if *beta <= 1.0 {
                return invalid(format!("Σ a_k diverges for beta = {beta} <= 1"));
            }
            c * (1.0 + 2.0 * hurwitz_zeta(*beta, 2.0))
        }
        (CoefficientSeq::Polynomial { c, beta }, Some(m)) => {
            let tail = if *beta > 1.0 && m > 10_000 {
                hurwitz_zeta(*beta, 2.0) - hurwitz_zeta(*beta, m as f64 + 2.0)
            } else {
                (1..=m).map(|k| (1.0 + k as f64).powf(-beta)).sum()
            };
            c * (1.0 + 2.0 * tail)
        }
    })
}

/// `Z_1, ..., Z_n` together with the truncation that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSeries {
    pub values: Vec<f64>,
    pub truncation: u64,
    pub seed: u64,
    pub model: InnovationModel,
    pub seq: CoefficientSeq,
}

impl LinearSeries {
    /// `index,value` rows with `index` running from 1.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{v}", i + 1)?;
        }
        Ok(())
    }
}

/// `Z_j = Σ_{|k|≤K} a_k ξ_{j−k}` for `j = 1..=n`, from the innovation window
/// `[1−K, n+K]` of `seed`.
pub fn build_linear_series(
    model: &InnovationModel,
    seq: &CoefficientSeq,
    k: u64,
    n: usize,
    seed: u64,
) -> Result<LinearSeries> {
    seq.validate()?;
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let ki = i64::try_from(k).map_err(|_| Error::InvalidArgument(format!("truncation {k} too large")))?;
    let window = model.sample_window(1 - ki, n as i64 + ki, seed)?;
    // rev[u] = a_{K−u}, so Z_j = Σ_u rev[u] ξ_{j−K+u} = Σ_u rev[u] window[j−1+u].
    let rev: Vec<f64> = (0..=2 * ki).map(|u| seq.coefficient(ki - u)).collect();
    let values = (0..n)
        .map(|j| rev.iter().zip(&window[j..j + rev.len()]).map(|(a, x)| a * x).sum())
        .collect();
    Ok(LinearSeries { values, truncation: k, seed, model: model.clone(), seq: seq.clone() })
}

/// `[n t]`, tolerant of `n t` landing one ulp below an integer.
pub(crate) fn floor_nt(n: usize, t: f64) -> usize {
    let x = n as f64 * t;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// `X(t) = b_n^{-1} Σ_{j ≤ [nt]} (Z_j − center)` on `[0, T]`.
pub fn partial_sum_path(values: &[f64], n: usize, b_n: f64, center: f64, horizon: f64) -> Result<StepPath> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if !(b_n > 0.0 && b_n.is_finite()) {
        return invalid(format!("b_n must be positive, got {b_n}"));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return invalid(format!("horizon must be positive, got {horizon}"));
    }
    let count = floor_nt(n, horizon);
    if count > values.len() {
        return invalid(format!("need {count} values for n = {n}, T = {horizon}, got {}", values.len()));
    }
    let jumps = values[..count]
        .iter()
        .enumerate()
        .map(|(i, z)| (((i + 1) as f64 / n as f64).min(horizon), (z - center) / b_n))
        .collect();
    StepPath::new(horizon, 0.0, jumps)
}

/// A linear process with a fixed truncation `K` of its coefficient sequence.
///
/// The full path uses `|k| ≤ K` and centering `A_K c_n`; truncated paths use
/// `|k| ≤ min(m, K)` and `A_m c_n`, all from one innovation window per seed.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProcess {
    pub model: InnovationModel,
    pub seq: CoefficientSeq,
    pub truncation: u64,
}

impl LinearProcess {
    pub fn new(model: InnovationModel, seq: CoefficientSeq, truncation: u64) -> Result<Self> {
        seq.validate()?;
        Ok(Self { model, seq, truncation })
    }

    /// Truncation from [`choose_truncation`], capped by the support of finite lists.
    pub fn with_tolerance(model: InnovationModel, seq: CoefficientSeq, r: f64, tol: f64) -> Result<Self> {
        let k = choose_truncation(&seq, r, tol)?;
        let k = seq.support_radius().map_or(k, |radius| k.min(radius));
        Self::new(model, seq, k)
    }

    pub fn series(&self, n: usize, seed: u64) -> Result<LinearSeries> {
        build_linear_series(&self.model, &self.seq, self.truncation, n, seed)
    }

    /// `X_n` on `[0, T]`.
    pub fn path(&self, n: usize, b_n: f64, c_n: f64, horizon: f64, seed: u64) -> Result<StepPath> {
        self.truncated_path(self.truncation, n, b_n, c_n, horizon, seed)
    }

    /// `X_n^{(m)}` on `[0, T]`, coupled with [`LinearProcess::path`].
    pub fn truncated_path(
        &self,
        m: u64,
        n: usize,
        b_n: f64,
        c_n: f64,
        horizon: f64,
        seed: u64,
    ) -> Result<StepPath> {
        let m = m.min(self.truncation);
        let count = floor_nt(n, horizon).max(1);
        let series = build_linear_series(&self.model, &self.seq, m, count, seed)?;
        let center = total_mass(&self.seq, Some(m))? * c_n;
        partial_sum_path(&series.values, n, b_n, center, horizon)
    }
}

/// `X_n^{(m)}` built directly from `|k| ≤ m`, centered by `A_m c_n`.
#[allow(clippy::too_many_arguments)]
pub fn truncated_process_path(
    model: &InnovationModel,
    seq: &CoefficientSeq,
    m: u64,
    n: usize,
    b_n: f64,
    c_n: f64,
    horizon: f64,
    seed: u64,
) -> Result<StepPath> {
    LinearProcess::new(model.clone(), seq.clone(), m)?.path(n, b_n, c_n, horizon, seed)
}

/// `sup_{0≤t≤T} |x(t) − y(t)|`.
pub fn approximation_gap(x: &StepPath, y: &StepPath, horizon: f64) -> Result<f64> {
    for p in [x, y] {
        if (p.horizon() - horizon).abs() > 1e-12 * horizon.abs().max(1.0) {
            return invalid(format!("path horizon {} differs from T = {horizon}", p.horizon()));
        }
    }
    uniform_distance(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Compares the index-shifted partial-sum path with the unshifted path
/// evaluated at `max(0, t − k/n)`.
///
/// `lhs = max_{0 ≤ J ≤ [nT]} |S^{(k)}_J − S_{max(0, J−k)}| / b_n`, where
/// `S^{(k)}_J = Σ_{j≤J}(ξ_{j−k} − c_n)` and `S = S^{(0)}`. The bound is the
/// boundary sum: for `k < 0` it is `|Σ_{j=1}^{|k|}(ξ_j − c_n)| / b_n`, for
/// `k > 0` it is `max_{1≤l≤k} |Σ_{j=1−k}^{l−k}(ξ_j − c_n)| / b_n`.
#[allow(clippy::too_many_arguments)]
pub fn shift_check(
    model: &InnovationModel,
    k: i64,
    n: usize,
    b_n: f64,
    c_n: f64,
    horizon: f64,
    seed: u64,
) -> Result<ShiftCheck> {
    if k == 0 || k.unsigned_abs() as usize > n {
        return invalid(format!("shift k must satisfy 0 < |k| <= n, got k = {k}, n = {n}"));
    }
    if !(b_n > 0.0) {
        return invalid(format!("b_n must be positive, got {b_n}"));
    }
    let big_j = floor_nt(n, horizon) as i64;
    let lo = 1.min(1 - k);
    let hi = big_j.max(big_j - k).max(k.abs());
    let window = model.sample_window(lo, hi, seed)?;
    let xi = |j: i64| window[(j - lo) as usize] - c_n;

    let mut scale = 0.0;
    for j in lo..=hi {
        scale += xi(j).abs();
    }
    let prefix = |from: i64, len: i64| -> f64 { (0..len).map(|i| xi(from + i)).sum() };

    let mut lhs = 0.0f64;
    let mut shifted = 0.0;
    let mut unshifted = 0.0;
    let mut unshifted_len = 0i64;
    for jj in 0..=big_j {
        if jj > 0 {
            shifted += xi(jj - k);
        }
        let target = (jj - k).max(0);
        if target < unshifted_len {
            unshifted = prefix(1, target);
            unshifted_len = target;
        }
        while unshifted_len < target {
            unshifted_len += 1;
            unshifted += xi(unshifted_len);
        }
        lhs = lhs.max((shifted - unshifted).abs());
    }
    let rhs = if k < 0 {
        prefix(1, -k).abs()
    } else {
        let mut acc = 0.0;
        let mut best = 0.0f64;
        for j in 1 - k..=0 {
            acc += xi(j);
            best = best.max(acc.abs());
        }
        best
    };
    let (lhs, rhs) = (lhs / b_n, rhs / b_n);
    let slack = 1e-12 * (1.0 + scale / b_n);
    Ok(ShiftCheck { lhs, rhs, ok: lhs <= rhs + slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::innovations::DistributionSpec;

    fn half_half() -> CoefficientSeq {
        CoefficientSeq::FiniteList { first_index: 0, values: vec![0.5, 0.5] }
    }

    #[test]
    fn tail_mass_examples() {
        let g = CoefficientSeq::Geometric { c: 1.0, rho: 0.5 };
        assert!((coeff_tail_mass(&g, 1.0, 3).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(coeff_tail_mass(&half_half(), 1.0, 1).unwrap(), 0.0);
        let p = CoefficientSeq::Polynomial { c: 1.0, beta: 1.0 };
        assert!(coeff_tail_mass(&p, 1.0, 5).is_err());
        let p = CoefficientSeq::Polynomial { c: 1.0, beta: 2.0 };
        let direct: f64 = 2.0 * (6..200_000).map(|k| (1.0 + k as f64).powi(-2)).sum::<f64>();
        let tail_bound = 2.0 / 200_000.0;
        assert!((coeff_tail_mass(&p, 1.0, 5).unwrap() - direct - tail_bound).abs() < 1e-9);
    }

    #[test]
    fn truncation_examples() {
        let g = CoefficientSeq::Geometric { c: 1.0, rho: 0.5 };
        assert_eq!(choose_truncation(&g, 1.0, 0.25).unwrap(), 3);
        let f = CoefficientSeq::FiniteList { first_index: -2, values: vec![0.1, 0.2, 0.3, 0.2, 0.1] };
        assert!(choose_truncation(&f, 1.0, 1e-12).unwrap() <= 2);
        let g = CoefficientSeq::Geometric { c: 1.0, rho: 0.9 };
        let k = choose_truncation(&g, 0.5, 1e-6).unwrap();
        assert!(coeff_tail_mass(&g, 0.5, k).unwrap() <= 1e-6);
        assert!(coeff_tail_mass(&g, 0.5, k - 1).unwrap() > 1e-6);
    }

    #[test]
    fn total_mass_examples() {
        let g = CoefficientSeq::Geometric { c: 1.0, rho: 0.5 };
        assert!((total_mass(&g, None).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(total_mass(&g, Some(0)).unwrap(), 1.0);
        assert!((total_mass(&g, Some(2)).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(total_mass(&half_half(), None).unwrap(), 1.0);
        assert_eq!(total_mass(&half_half(), Some(0)).unwrap(), 0.5);
    }

    #[test]
    fn identity_and_constant_series() {
        let model = InnovationModel::iid(DistributionSpec::symmetric(1.5).unwrap());
        let s = build_linear_series(&model, &CoefficientSeq::identity(), 0, 50, 9).unwrap();
        assert_eq!(s.values, model.sample_window(1, 50, 9).unwrap());
        let c = InnovationModel::constant(2.0);
        let s = build_linear_series(&c, &half_half(), 1, 20, 1).unwrap();
        assert!(s.values.iter().all(|&z| z == 2.0));
    }

    #[test]
    fn partial_sum_examples() {
        let p = partial_sum_path(&[3.0], 1, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.jump_times(), &[1.0]);
        assert_eq!(p.eval(1.0).unwrap(), 2.0);
        assert_eq!(p.eval(1.0 - 1e-9).unwrap(), 0.0);
        let zero = partial_sum_path(&[1.0; 10], 10, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(zero.num_jumps(), 0);
        assert!(partial_sum_path(&[1.0; 5], 10, 1.0, 0.0, 1.0).is_err());
        let p = partial_sum_path(&[2.0; 30], 10, 1.0, 0.0, 3.0).unwrap();
        assert_eq!(p.num_jumps(), 30);
        assert_eq!(p.eval(3.0).unwrap(), 60.0);
    }

    #[test]
    fn truncated_path_saturates() {
        let model = InnovationModel::iid(DistributionSpec::new(1.5, 0.7, 1.0).unwrap());
        let g = CoefficientSeq::Geometric { c: 1.0, rho: 0.5 };
        let proc_ = LinearProcess::with_tolerance(model, g, 1.0, 1e-8).unwrap();
        let full = proc_.path(200, 30.0, 0.2, 1.0, 4).unwrap();
        let same = proc_.truncated_path(proc_.truncation + 5, 200, 30.0, 0.2, 1.0, 4).unwrap();
        assert_eq!(full, same);
    }

    #[test]
    fn shift_examples() {
        let model = InnovationModel::constant(1.0);
        let r = shift_check(&model, 3, 100, 1.0, 1.0, 1.0, 0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let model = InnovationModel::iid(DistributionSpec::symmetric(1.5).unwrap());
        let xi1 = model.sample_window(1, 1, 5).unwrap()[0];
        let r = shift_check(&model, -1, 100, 10.0, 0.1, 1.0, 5).unwrap();
        assert!((r.lhs - (xi1 - 0.1).abs() / 10.0).abs() < 1e-14);
        assert!((r.rhs - (xi1 - 0.1).abs() / 10.0).abs() < 1e-14);
        assert!(r.ok);
        assert!(shift_check(&model, 0, 100, 1.0, 0.0, 1.0, 5).is_err());
    }
}
