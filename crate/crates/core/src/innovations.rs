//! Heavy-tailed innovations with exact power tails.
//!
//! The marginal law is the "Pareto-balanced" law: `|ξ|` is Pareto with index
//! `alpha` and lower bound `scale`, and the sign is positive with probability
//! `balance_p`. Every tail probability and truncated moment therefore has a
//! closed form. Dependence is either none or Markov-modulated volatility,
//! `ξ_j = σ_{S_j} η_j` with `S` a stationary finite-state chain.

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_panels, QuadOptions};
use crate::rng::CounterRng;

const STATE_LANE: u32 = 2;
const MAX_LOOKBACK: i64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    alpha: f64,
    balance_p: f64,
    scale: f64,
}

/// Which side of the truncation point a truncated moment integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl DistributionSpec {
    pub fn new(alpha: f64, balance_p: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return invalid(format!("alpha must lie in (0, 2], got {alpha}"));
        }
        if !(0.0..=1.0).contains(&balance_p) {
            return invalid(format!("balance_p must lie in [0, 1], got {balance_p}"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return invalid(format!("scale must be positive, got {scale}"));
        }
        Ok(Self { alpha, balance_p, scale })
    }

    pub fn symmetric(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.5, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn balance_p(&self) -> f64 {
        self.balance_p
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `α·scale^α`, the constant in front of the density of `|ξ|`.
    fn norm(&self) -> f64 {
        self.alpha * self.scale.powf(self.alpha)
    }

    pub fn tail_prob(&self, x: f64) -> f64 {
        if x <= self.scale {
            1.0
        } else {
            (x / self.scale).powf(-self.alpha)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let p = self.balance_p;
        if x < -self.scale {
            (1.0 - p) * (-x / self.scale).powf(-self.alpha)
        } else if x < self.scale {
            1.0 - p
        } else {
            1.0 - p * (x / self.scale).powf(-self.alpha)
        }
    }

    /// Density of `ξ` (zero on `(-scale, scale)`).
    pub fn density(&self, y: f64) -> f64 {
        let a = y.abs();
        if a < self.scale {
            return 0.0;
        }
        let side = if y > 0.0 { self.balance_p } else { 1.0 - self.balance_p };
        side * self.norm() * a.powf(-self.alpha - 1.0)
    }

    /// `E(|ξ|^β I(|ξ| ≤ x))` for any `β > 0`.
    fn abs_moment_below(&self, beta: f64, x: f64) -> f64 {
        let s = self.scale;
        if x <= s {
            return 0.0;
        }
        let e = beta - self.alpha;
        if e == 0.0 {
            self.norm() * (x / s).ln()
        } else {
            self.norm() * (x.powf(e) - s.powf(e)) / e
        }
    }

    /// `E(|ξ|^β I(|ξ| > x))`, finite for `β < α`.
    fn abs_moment_above(&self, beta: f64, x: f64) -> f64 {
        self.norm() * x.max(self.scale).powf(beta - self.alpha) / (self.alpha - beta)
    }

    pub fn truncated_second_moment(&self, x: f64) -> f64 {
        self.abs_moment_below(2.0, x)
    }

    pub fn truncated_mean(&self, x: f64) -> f64 {
        (2.0 * self.balance_p - 1.0) * self.abs_moment_below(1.0, x)
    }

    /// `E ξ`, defined for `α > 1`.
    pub fn mean(&self) -> Option<f64> {
        (self.alpha > 1.0).then(|| (2.0 * self.balance_p - 1.0) * self.abs_moment_above(1.0, 0.0))
    }

    /// Inverse-CDF draw from two uniforms: `u` sets the magnitude, `v` the sign.
    #[inline]
    pub fn sample(&self, u: f64, v: f64) -> f64 {
        let magnitude = self.scale * u.powf(-1.0 / self.alpha);
        if v < self.balance_p {
            magnitude
        } else {
            -magnitude
        }
    }

    /// `E|ξ I(|ξ| ≤ b) − c|^τ` by quadrature in `log y` (closed form when `c = 0`).
    fn centered_truncated_abs_moment(&self, tau: f64, b: f64, c: f64) -> Result<f64> {
        let outside = self.tail_prob(b) * c.abs().powf(tau);
        if c == 0.0 {
            return Ok(self.abs_moment_below(tau, b));
        }
        if b <= self.scale {
            return Ok(outside);
        }
        let (lo, hi) = (self.scale.ln(), b.ln());
        let norm = self.norm();
        let alpha = self.alpha;
        let mut total = outside;
        for (weight, shift) in [(self.balance_p, -c), (1.0 - self.balance_p, c)] {
            if weight == 0.0 {
                continue;
            }
            // |y + shift|^τ y^(-α) in u = ln y; kink where y = -shift
            let mut breaks = vec![lo];
            let kink = -shift;
            if kink > self.scale && kink < b {
                breaks.push(kink.ln());
            }
            breaks.push(hi);
            let r = integrate_panels(
                |u| {
                    let y = u.exp();
                    (y + shift).abs().powf(tau) * y.powf(-alpha)
                },
                &breaks,
                QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_panels: 4000 },
            );
            if !r.converged {
                return Err(Error::Numeric(format!(
                    "centered truncated moment did not converge (tau={tau}, b={b}, c={c}, err={})",
                    r.error
                )));
            }
            total += weight * norm * r.value;
        }
        Ok(total)
    }
}

/// Markov-modulated volatility: a primitive finite-state chain with per-state scales.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovVolatility {
    state_scales: Vec<f64>,
    transition: Vec<Vec<f64>>,
    cumulative: Vec<Vec<f64>>,
    stationary: Vec<f64>,
}

impl MarkovVolatility {
    pub fn new(state_scales: Vec<f64>, transition: Vec<Vec<f64>>) -> Result<Self> {
        let d = state_scales.len();
        if d == 0 {
            return invalid("markov_volatility needs at least one state");
        }
        if state_scales.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return invalid("state scales must be positive");
        }
        if transition.len() != d || transition.iter().any(|row| row.len() != d) {
            return invalid(format!("transition matrix must be {d}x{d}"));
        }
        for (i, row) in transition.iter().enumerate() {
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return invalid(format!("transition row {i} has entries outside [0, 1]"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return invalid(format!("transition row {i} sums to {sum}, not 1"));
            }
        }
        if !is_primitive(&transition) {
            return invalid("transition matrix must be irreducible and aperiodic");
        }
        let cumulative = transition
            .iter()
            .map(|row| {
                let mut acc = 0.0;
                row.iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect()
            })
            .collect();
        let stationary = stationary_distribution(&transition);
        Ok(Self { state_scales, transition, cumulative, stationary })
    }

    pub fn state_scales(&self) -> &[f64] {
        &self.state_scales
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    #[inline]
    fn step(&self, state: usize, u: f64) -> usize {
        let row = &self.cumulative[state];
        row.iter().position(|&c| u < c).unwrap_or(row.len() - 1)
    }

    /// Chain state at `index`, by coupling from the past on the shared
    /// per-index update uniforms. The result is an exact stationary draw and
    /// `state_at(j + 1) == step(state_at(j), u_{j+1})` for every `j`.
    fn state_at(&self, rng: &CounterRng, index: i64) -> Result<usize> {
        let d = self.state_scales.len();
        if d == 1 {
            return Ok(0);
        }
        let mut lookback: i64 = 16;
        loop {
            let mut states: Vec<usize> = (0..d).collect();
            for t in (index - lookback + 1)..=index {
                let u = rng.uniform_at(t, STATE_LANE);
                for s in states.iter_mut() {
                    *s = self.step(*s, u);
                }
                states.sort_unstable();
                states.dedup();
            }
            if states.len() == 1 {
                return Ok(states[0]);
            }
            lookback *= 2;
            if lookback > MAX_LOOKBACK {
                return Err(Error::Numeric(
                    "markov chain failed to coalesce; the inverse-CDF coupling does not contract for this transition matrix".into(),
                ));
            }
        }
    }
}

fn is_primitive(p: &[Vec<f64>]) -> bool {
    let d = p.len();
    let adj: Vec<Vec<bool>> = p.iter().map(|r| r.iter().map(|&x| x > 0.0).collect()).collect();
    // Wielandt: primitive iff P^k > 0 for k = (d-1)^2 + 1
    let k = (d - 1) * (d - 1) + 1;
    let mut cur = adj.clone();
    for _ in 1..k {
        let mut next = vec![vec![false; d]; d];
        for i in 0..d {
            for m in 0..d {
                if cur[i][m] {
                    for j in 0..d {
                        next[i][j] |= adj[m][j];
                    }
                }
            }
        }
        cur = next;
    }
    cur.iter().all(|r| r.iter().all(|&b| b))
}

fn stationary_distribution(p: &[Vec<f64>]) -> Vec<f64> {
    let d = p.len();
    let mut pi = vec![1.0 / d as f64; d];
    for _ in 0..1_000_000 {
        let mut next = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                next[j] += pi[i] * p[i][j];
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        let diff = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        pi = next;
        if diff < 1e-16 {
            break;
        }
    }
    pi
}

#[derive(Debug, Clone, PartialEq)]
pub enum DependenceSpec {
    Iid,
    MarkovVolatility(MarkovVolatility),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Marginal {
    Pareto(DistributionSpec),
    /// Deterministic innovations. A test hook for exactness checks, not a
    /// statistical model.
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnovationModel {
    marginal: Marginal,
    dependence: DependenceSpec,
}

impl InnovationModel {
    pub fn iid(dist: DistributionSpec) -> Self {
        Self { marginal: Marginal::Pareto(dist), dependence: DependenceSpec::Iid }
    }

    pub fn markov_volatility(dist: DistributionSpec, chain: MarkovVolatility) -> Self {
        Self { marginal: Marginal::Pareto(dist), dependence: DependenceSpec::MarkovVolatility(chain) }
    }

    pub fn constant(value: f64) -> Self {
        Self { marginal: Marginal::Constant(value), dependence: DependenceSpec::Iid }
    }

    pub fn marginal(&self) -> &Marginal {
        &self.marginal
    }

    pub fn dependence(&self) -> &DependenceSpec {
        &self.dependence
    }

    pub fn dist(&self) -> Option<&DistributionSpec> {
        match &self.marginal {
            Marginal::Pareto(d) => Some(d),
            Marginal::Constant(_) => None,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        self.dist().map(|d| d.alpha)
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.marginal {
            Marginal::Pareto(d) => d.balance_p == 0.5,
            Marginal::Constant(c) => *c == 0.0,
        }
    }

    /// `(weight, volatility)` pairs of the stationary scale mixture.
    fn components(&self) -> Vec<(f64, f64)> {
        match &self.dependence {
            DependenceSpec::Iid => vec![(1.0, 1.0)],
            DependenceSpec::MarkovVolatility(chain) => chain
                .stationary
                .iter()
                .copied()
                .zip(chain.state_scales.iter().copied())
                .collect(),
        }
    }

    /// Smallest `|ξ|` in the support.
    pub fn support_floor(&self) -> f64 {
        match &self.marginal {
            Marginal::Pareto(d) => {
                self.components().iter().map(|&(_, s)| s).fold(f64::INFINITY, f64::min) * d.scale
            }
            Marginal::Constant(c) => c.abs(),
        }
    }

    /// Innovations `ξ_lo, ..., ξ_hi` of the two-sided sequence keyed by `seed`.
    pub fn sample_window(&self, lo: i64, hi: i64, seed: u64) -> Result<Vec<f64>> {
        if lo > hi + 1 {
            return invalid(format!("invalid window [{lo}, {hi}]"));
        }
        let mut out = vec![0.0; (hi + 1 - lo) as usize];
        self.fill_window(lo, seed, &mut out)?;
        Ok(out)
    }

    /// Fill `out[i]` with `ξ_{lo+i}`.
    pub fn fill_window(&self, lo: i64, seed: u64, out: &mut [f64]) -> Result<()> {
        let rng = CounterRng::new(seed, 0);
        match (&self.marginal, &self.dependence) {
            (Marginal::Constant(c), _) => out.fill(*c),
            (Marginal::Pareto(d), DependenceSpec::Iid) => {
                for (i, x) in out.iter_mut().enumerate() {
                    let j = lo + i as i64;
                    *x = d.sample(rng.uniform_at(j, 0), rng.uniform_at(j, 1));
                }
            }
            (Marginal::Pareto(d), DependenceSpec::MarkovVolatility(chain)) => {
                if out.is_empty() {
                    return Ok(());
                }
                let mut state = chain.state_at(&rng, lo)?;
                for (i, x) in out.iter_mut().enumerate() {
                    let j = lo + i as i64;
                    if i > 0 {
                        state = chain.step(state, rng.uniform_at(j, STATE_LANE));
                    }
                    *x = chain.state_scales[state] * d.sample(rng.uniform_at(j, 0), rng.uniform_at(j, 1));
                }
            }
        }
        Ok(())
    }

    /// `Pr(|ξ_1| > x)`.
    pub fn tail_prob(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(self.tail_prob_unchecked(x))
    }

    pub(crate) fn tail_prob_unchecked(&self, x: f64) -> f64 {
        match &self.marginal {
            Marginal::Constant(c) => f64::from(u8::from(c.abs() > x)),
            Marginal::Pareto(d) => self.components().iter().map(|&(w, s)| w * d.tail_prob(x / s)).sum(),
        }
    }

    /// Marginal CDF of `ξ_1`.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.marginal {
            Marginal::Constant(c) => f64::from(u8::from(x >= *c)),
            Marginal::Pareto(d) => self.components().iter().map(|&(w, s)| w * d.cdf(x / s)).sum(),
        }
    }

    /// `E(ξ_1² I(|ξ_1| ≤ x))`.
    pub fn truncated_second_moment(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(match &self.marginal {
            Marginal::Constant(c) => if c.abs() <= x { c * c } else { 0.0 },
            Marginal::Pareto(d) => self
                .components()
                .iter()
                .map(|&(w, s)| w * s * s * d.truncated_second_moment(x / s))
                .sum(),
        })
    }

    /// `E(ξ_1 I(|ξ_1| ≤ x))`.
    pub fn truncated_mean(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(match &self.marginal {
            Marginal::Constant(c) => if c.abs() <= x { *c } else { 0.0 },
            Marginal::Pareto(d) => {
                if d.balance_p == 0.5 {
                    return Ok(0.0);
                }
                self.components().iter().map(|&(w, s)| w * s * d.truncated_mean(x / s)).sum()
            }
        })
    }

    /// `E(|ξ_1|^β I(|ξ_1| > x))` or `E(|ξ_1|^β I(|ξ_1| ≤ x))`.
    pub fn truncated_abs_moment(&self, beta: f64, x: f64, side: Side) -> Result<f64> {
        check_positive(x)?;
        if !(beta > 0.0) {
            return invalid(format!("beta must be positive, got {beta}"));
        }
        match &self.marginal {
            Marginal::Constant(c) => {
                let inside = c.abs() <= x;
                let keep = match side {
                    Side::Below => inside,
                    Side::Above => !inside,
                };
                Ok(if keep { c.abs().powf(beta) } else { 0.0 })
            }
            Marginal::Pareto(d) => {
                if side == Side::Above && beta >= d.alpha {
                    return invalid(format!(
                        "E|ξ|^β I(|ξ| > x) diverges for beta = {beta} >= alpha = {}",
                        d.alpha
                    ));
                }
                Ok(self
                    .components()
                    .iter()
                    .map(|&(w, s)| {
                        let m = match side {
                            Side::Above => d.abs_moment_above(beta, x / s),
                            Side::Below => d.abs_moment_below(beta, x / s),
                        };
                        w * s.powf(beta) * m
                    })
                    .sum())
            }
        }
    }

    /// `E ξ_1` when it exists (`α > 1`, or constant innovations).
    pub fn mean(&self) -> Option<f64> {
        match &self.marginal {
            Marginal::Constant(c) => Some(*c),
            Marginal::Pareto(d) => {
                let m = d.mean()?;
                Some(self.components().iter().map(|&(w, s)| w * s * m).sum())
            }
        }
    }

    /// `E|ξ_1 I(|ξ_1| ≤ b) − c|^τ`.
    pub fn centered_truncated_abs_moment(&self, tau: f64, b: f64, c: f64) -> Result<f64> {
        check_positive(b)?;
        if !(tau > 0.0) {
            return invalid(format!("tau must be positive, got {tau}"));
        }
        match &self.marginal {
            Marginal::Constant(v) => {
                let kept = if v.abs() <= b { *v } else { 0.0 };
                Ok((kept - c).abs().powf(tau))
            }
            Marginal::Pareto(d) => {
                let mut total = 0.0;
                for (w, s) in self.components() {
                    total += w * s.powf(tau) * d.centered_truncated_abs_moment(tau, b / s, c / s)?;
                }
                Ok(total)
            }
        }
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        invalid(format!("argument must be positive, got {x}"))
    }
}
