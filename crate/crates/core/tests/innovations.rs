mod common;

use common::log_simpson;
use fclt::innovations::{DistributionSpec, InnovationModel, MarkovVolatility, Side};
use proptest::prelude::*;

fn pareto(alpha: f64, p: f64) -> InnovationModel {
    InnovationModel::iid(DistributionSpec::new(alpha, p, 1.0).unwrap())
}

/// Density of |ξ| for the unit-scale Pareto law.
fn abs_density(alpha: f64) -> impl Fn(f64) -> f64 {
    move |y| alpha * y.powf(-alpha - 1.0)
}

#[test]
fn empirical_tail_fraction_matches_power_law() {
    let m = pareto(1.5, 0.5);
    let n = 1_000_000;
    let w = m.sample_window(1, n, 2024).unwrap();
    let frac = w.iter().filter(|x| x.abs() > 4.0).count() as f64 / n as f64;
    let p = 4f64.powf(-1.5);
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((frac - p).abs() < 3.0 * se, "{frac} vs {p}");
    let pos = w.iter().filter(|&&x| x > 0.0).count() as f64 / n as f64;
    assert!((pos - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt());
}

#[test]
fn truncated_moments_match_quadrature() {
    let f = abs_density(1.5);
    let second = log_simpson(|y| y * y * f(y), 1.0, 4.0, 2000);
    assert!((pareto(1.5, 0.5).truncated_second_moment(4.0).unwrap() - second).abs() < 1e-9);
    assert!((second - 3.0).abs() < 1e-9);

    let mean = log_simpson(|y| y * f(y), 1.0, 4.0, 2000);
    assert!((pareto(1.5, 1.0).truncated_mean(4.0).unwrap() - mean).abs() < 1e-9);
    assert!((mean - 1.5).abs() < 1e-9);

    // E|ξ| I(|ξ| > 4) on a long log grid plus the analytic remainder past 1e8.
    let above = log_simpson(|y| y * f(y), 4.0, 1e8, 20_000) + 3.0 * 1e8f64.powf(-0.5);
    let lib = pareto(1.5, 0.5).truncated_abs_moment(1.0, 4.0, Side::Above).unwrap();
    assert!((lib - above).abs() < 1e-8 && (lib - 1.5).abs() < 1e-12, "{lib} vs {above}");
    let full = pareto(1.5, 0.5).truncated_abs_moment(1.0, 1.0, Side::Above).unwrap();
    assert!((full - 3.0).abs() < 1e-12);
}

#[test]
fn markov_marginal_is_the_stationary_mixture() {
    let chain = MarkovVolatility::new(vec![0.5, 3.0], vec![vec![0.95, 0.05], vec![0.2, 0.8]]).unwrap();
    let pi = chain.stationary().to_vec();
    // Stationary law solves π P = π: π_1 = 0.05 / 0.25.
    assert!((pi[1] - 0.2).abs() < 1e-12);
    let m = InnovationModel::markov_volatility(DistributionSpec::symmetric(1.5).unwrap(), chain);
    let u = 5.0;
    let mixture = pi[0] * (u / 0.5f64).powf(-1.5) + pi[1] * (u / 3.0f64).powf(-1.5);
    assert!((m.tail_prob(u).unwrap() - mixture).abs() < 1e-14);

    let reps = 400;
    let len = 2000;
    let mut hits = 0usize;
    let mut pairs = 0usize;
    for seed in 0..reps {
        let w = m.sample_window(1, len, seed).unwrap();
        hits += w.iter().filter(|x| x.abs() > u).count();
        pairs += w.windows(2).filter(|p| p[0].abs() > u && p[1].abs() > u).count();
    }
    let total = (reps * len as u64) as f64;
    let frac = hits as f64 / total;
    // Volatility clustering inflates the variance well beyond the iid SE.
    let se = (mixture * (1.0 - mixture) / total).sqrt();
    assert!((frac - mixture).abs() < 15.0 * se, "{frac} vs {mixture}");
    // Volatility persistence: joint exceedances beat independence.
    let joint = pairs as f64 / total;
    assert!(joint > 2.0 * frac * frac, "{joint} vs {}", frac * frac);
}

#[test]
fn centered_moment_matches_monte_carlo() {
    let m = pareto(1.5, 0.8);
    let (tau, b, c) = (0.5, 30.0, 0.9);
    let exact = m.centered_truncated_abs_moment(tau, b, c).unwrap();
    let w = m.sample_window(1, 1_000_000, 5).unwrap();
    let vals: Vec<f64> = w.iter().map(|&x| ((if x.abs() <= b { x } else { 0.0 }) - c).abs().powf(tau)).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
    assert!((mean - exact).abs() < 4.0 * (var / vals.len() as f64).sqrt(), "{mean} vs {exact}");
}

proptest! {
    #[test]
    fn tail_and_cdf_agree(alpha in 0.2f64..2.0, p in 0.0f64..=1.0, scale in 0.1f64..5.0, x in 0.01f64..100.0) {
        let m = InnovationModel::iid(DistributionSpec::new(alpha, p, scale).unwrap());
        let tail = m.tail_prob(x).unwrap();
        let via_cdf = 1.0 - m.cdf(x) + m.cdf(-x);
        // cdf(-x) counts mass at -x only below it; the law is continuous.
        prop_assert!((tail - via_cdf).abs() < 1e-12 || x <= scale);
        prop_assert!(m.cdf(x) >= m.cdf(x * 0.9 - 0.1));
    }

    #[test]
    fn moments_split_at_truncation(alpha in 0.3f64..1.9, x in 1.01f64..1e4, beta in 0.05f64..0.25) {
        // E|ξ|^β = below + above, and the full moment is α/(α−β).
        let m = pareto(alpha, 0.5);
        let below = m.truncated_abs_moment(beta, x, Side::Below).unwrap();
        let above = m.truncated_abs_moment(beta, x, Side::Above).unwrap();
        let full = alpha / (alpha - beta);
        prop_assert!((below + above - full).abs() < 1e-9 * full);
    }

    #[test]
    fn truncated_mean_is_odd_in_balance(alpha in 0.3f64..2.0, p in 0.0f64..=1.0, x in 1.0f64..1e3) {
        let a = pareto(alpha, p).truncated_mean(x).unwrap();
        let b = pareto(alpha, 1.0 - p).truncated_mean(x).unwrap();
        prop_assert!((a + b).abs() < 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn windows_are_consistent(lo in -100i64..100, len in 0i64..200, off in 0i64..50, seed: u64) {
        let m = pareto(1.2, 0.3);
        let w = m.sample_window(lo, lo + len, seed).unwrap();
        let sub_lo = lo + off.min(len);
        let sub = m.sample_window(sub_lo, lo + len, seed).unwrap();
        prop_assert_eq!(&w[(sub_lo - lo) as usize..], &sub[..]);
    }
}
