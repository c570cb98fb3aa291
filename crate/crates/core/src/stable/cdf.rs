//! Stable CDF evaluation.
//!
//! For `|z| ≤ 50` (with `z` the standardized argument) the CDF comes from the
//! Gil–Pelaez inversion `F = 1/2 − (1/π) ∫_0^∞ Im(e^{−iθz} φ(θ)) / θ dθ`,
//! integrated with adaptive Gauss–Kronrod over panels laid out along the
//! phase of the integrand. Farther out the integrand oscillates too fast to
//! be cheap, and the non-oscillatory Zolotarev–Nolan integral over a finite
//! angle range is used instead.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use rayon::prelude::*;

use super::StableParams;
use crate::error::{Error, Result};
use crate::quad::{integrate_panels, QuadOptions, QuadResult};

/// Standardized arguments beyond this use the angular integral.
const INVERSION_LIMIT: f64 = 50.0;
/// Integrate `e^{−w}` weights out to `w = 25`; the neglected tail is below `1e−12`.
const EXP_CUTOFF: f64 = 25.0;

fn quad_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-10, rel_tol: 0.0, max_panels: 400_000 }
}

/// `Pr(X ≤ x)` for `X ~ S_α(σ, β, μ)`.
pub fn stable_cdf(params: &StableParams, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidArgument("x is NaN".into()));
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let (a, b, s) = (params.alpha(), params.beta(), params.scale());
    let z = if a == 1.0 {
        (x - params.location() - b * s * s.ln() / FRAC_PI_2) / s
    } else {
        (x - params.location()) / s
    };
    let f = standard_cdf(a, b, z).map_err(|e| match e {
        Error::Numeric(msg) => Error::Numeric(format!(
            "stable_cdf(alpha = {a}, beta = {b}, scale = {s}, location = {}, x = {x}): {msg}",
            params.location()
        )),
        other => other,
    })?;
    Ok(f.clamp(0.0, 1.0))
}

/// CDF of `S_α(1, β, 0)`.
fn standard_cdf(a: f64, b: f64, z: f64) -> Result<f64> {
    if a == 1.0 && b == 0.0 {
        return Ok(0.5 + z.atan() / PI);
    }
    if z.abs() <= INVERSION_LIMIT {
        inversion_cdf(a, b, z)
    } else if z > 0.0 {
        angular_cdf_positive(a, b, z)
    } else {
        Ok(1.0 - angular_cdf_positive(a, -b, -z)?)
    }
}

fn check(r: QuadResult, what: &str) -> Result<f64> {
    if r.converged && r.value.is_finite() {
        Ok(r.value)
    } else {
        Err(Error::Numeric(format!(
            "{what} quadrature did not converge (estimate {}, error {:.3e}, {} evaluations)",
            r.value, r.error, r.evals
        )))
    }
}

fn uniform_breaks(top: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..=count).map(move |k| top * k as f64 / count as f64)
}

fn finish_breaks(mut breaks: Vec<f64>, top: f64) -> Vec<f64> {
    breaks.extend([1e-8, 1e-6, 1e-4, 1e-2].into_iter().filter(|&t| t < top));
    breaks.push(0.0);
    breaks.push(top);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// Number of panels keeping each phase increment near `π/2`.
fn phase_panels(variation: f64) -> usize {
    (2.0 * variation / PI).ceil().min(1e6) as usize + 4
}

fn inversion_cdf(a: f64, b: f64, z: f64) -> Result<f64> {
    if a == 1.0 {
        // F = 1/2 + (1/π) ∫ e^{−θ} sin((2/π) β θ ln θ + z θ) / θ dθ
        let top = EXP_CUTOFF;
        let k = b / FRAC_PI_2;
        let variation = z.abs() * top + k.abs() * top * (top.ln().abs() + 1.0);
        let mut breaks: Vec<f64> = uniform_breaks(top, phase_panels(variation)).collect();
        breaks = finish_breaks(std::mem::take(&mut breaks), top);
        let r = integrate_panels(
            |t| if t == 0.0 { 0.0 } else { (-t).exp() * (k * t * t.ln() + z * t).sin() / t },
            &breaks,
            quad_opts(),
        );
        return Ok(0.5 + check(r, "inversion")? / PI);
    }
    let zeta = b * (PI * a / 2.0).tan();
    if a < 1.0 {
        // With w = θ^α: F = 1/2 − (1/(πα)) ∫ e^{−w} sin(ζ w − z w^{1/α}) / w dw
        let top = EXP_CUTOFF;
        let inv = 1.0 / a;
        let mut breaks: Vec<f64> = uniform_breaks(top, phase_panels(zeta.abs() * top)).collect();
        let n2 = phase_panels(z.abs() * top.powf(inv));
        breaks.extend((0..=n2).map(|k| top * (k as f64 / n2 as f64).powf(a)));
        let breaks = finish_breaks(breaks, top);
        let r = integrate_panels(
            |w| if w == 0.0 { 0.0 } else { (-w).exp() * (zeta * w - z * w.powf(inv)).sin() / w },
            &breaks,
            quad_opts(),
        );
        Ok(0.5 - check(r, "inversion")? / (PI * a))
    } else {
        // F = 1/2 − (1/π) ∫ e^{−θ^α} sin(ζ θ^α − z θ) / θ dθ
        let top = EXP_CUTOFF.powf(1.0 / a);
        let mut breaks: Vec<f64> = uniform_breaks(top, phase_panels(z.abs() * top)).collect();
        let n2 = phase_panels(zeta.abs() * EXP_CUTOFF);
        breaks.extend((0..=n2).map(|k| top * (k as f64 / n2 as f64).powf(1.0 / a)));
        let breaks = finish_breaks(breaks, top);
        let r = integrate_panels(
            |t| {
                if t == 0.0 {
                    return 0.0;
                }
                let ta = t.powf(a);
                (-ta).exp() * (zeta * ta - z * t).sin() / t
            },
            &breaks,
            quad_opts(),
        );
        Ok(0.5 - check(r, "inversion")? / PI)
    }
}

/// Zolotarev–Nolan representation for `z > 0`:
/// `F(z) = c₁ + sign(1−α)/π ∫_{−θ₀}^{π/2} exp(−z^{α/(α−1)} V(θ)) dθ` for `α ≠ 1`,
/// and `F(z) = (1/π) ∫_{−π/2}^{π/2} exp(−e^{−πz/(2β)} V(θ)) dθ` for `α = 1, β > 0`.
fn angular_cdf_positive(a: f64, b: f64, z: f64) -> Result<f64> {
    if a == 1.0 {
        if b < 0.0 {
            return Ok(1.0 - angular_cdf_positive(1.0, -b, -z)?);
        }
        let shift = -FRAC_PI_2 * z / b;
        let log_h = |th: f64| {
            let t = FRAC_PI_2 + b * th;
            shift + (t / FRAC_PI_2).ln() - th.cos().max(f64::MIN_POSITIVE).ln() + t * th.tan() / b
        };
        let integral = angular_integral(log_h, -FRAC_PI_2, FRAC_PI_2)?;
        return Ok(integral / PI);
    }
    let theta0 = (b * (PI * a / 2.0).tan()).atan() / a;
    let expo = a / (a - 1.0);
    let lz = expo * z.ln();
    let lc = (a * theta0).cos().ln() / (a - 1.0);
    let log_h = |th: f64| {
        let cos = th.cos().max(f64::MIN_POSITIVE);
        let sin = (a * (theta0 + th)).sin().max(f64::MIN_POSITIVE);
        let tail = (a * theta0 + (a - 1.0) * th).cos().max(f64::MIN_POSITIVE);
        lz + lc + expo * (cos.ln() - sin.ln()) + tail.ln() - cos.ln()
    };
    let integral = angular_integral(log_h, -theta0, FRAC_PI_2)?;
    if a < 1.0 {
        Ok((FRAC_PI_2 - theta0) / PI + integral / PI)
    } else {
        Ok(1.0 - integral / PI)
    }
}

/// `∫_lo^hi exp(−exp(log_h(θ))) dθ`, split where `log_h` crosses 0.
fn angular_integral<F: Fn(f64) -> f64>(log_h: F, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    let g = |th: f64| {
        let lh = log_h(th);
        if lh.is_nan() {
            0.0
        } else {
            (-lh.exp()).exp()
        }
    };
    let mut breaks = vec![lo];
    let eps = 1e-12 * (hi - lo);
    let (l0, l1) = (log_h(lo + eps), log_h(hi - eps));
    if l0.is_finite() && l1.is_finite() && (l0 < 0.0) != (l1 < 0.0) {
        let (mut x0, mut x1) = (lo + eps, hi - eps);
        for _ in 0..100 {
            let mid = 0.5 * (x0 + x1);
            if (log_h(mid) < 0.0) == (l0 < 0.0) {
                x0 = mid;
            } else {
                x1 = mid;
            }
        }
        let peak = 0.5 * (x0 + x1);
        let w = (hi - lo) * 1e-3;
        breaks.extend([peak - w, peak, peak + w].into_iter().filter(|&t| t > lo && t < hi));
    }
    breaks.push(hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let r = integrate_panels(g, &breaks, QuadOptions { abs_tol: 1e-11, rel_tol: 0.0, max_panels: 100_000 });
    check(r, "angular")
}

/// CDF values on a sorted grid after isotonic cleanup.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest upward adjustment made to restore monotonicity.
    pub cleanup: f64,
}

impl CdfTable {
    /// `x,F` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,F")?;
        for (x, f) in self.xs.iter().zip(&self.values) {
            writeln!(w, "{x},{f}")?;
        }
        Ok(())
    }
}

/// Evaluate on `xs` (sorted internally) in parallel, then clip quadrature
/// wiggles with a running maximum.
pub fn stable_cdf_batch(params: &StableParams, xs: &[f64]) -> Result<CdfTable> {
    let mut xs = xs.to_vec();
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("x grid contains NaN".into()));
    }
    xs.sort_by(f64::total_cmp);
    let mut values = xs.par_iter().map(|&x| stable_cdf(params, x)).collect::<Result<Vec<f64>>>()?;
    let mut cleanup = 0.0f64;
    let mut running = 0.0f64;
    for v in values.iter_mut() {
        if *v < running {
            cleanup = cleanup.max(running - *v);
            *v = running;
        }
        running = *v;
    }
    Ok(CdfTable { xs, values, cleanup })
}
