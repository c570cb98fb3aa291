use fclt::special::kolmogorov_quantile;
use fclt::stable::{
    ks_against_stable, ks_statistic, ks_two_sample, levy_path, sample_stable, stable_cdf, stable_cdf_batch,
    StableParams,
};

fn p(a: f64, b: f64) -> StableParams {
    StableParams::standard(a, b).unwrap()
}

#[test]
fn levy_distribution_matches_erfc() {
    // S_{1/2}(1, 1, 0) is Lévy with F(x) = erfc(sqrt(1 / (2x))).
    let levy = p(0.5, 1.0);
    for x in [0.05f64, 0.2, 0.5, 1.0, 3.0, 10.0, 40.0, 49.0] {
        let want = libm::erfc((1.0 / (2.0 * x)).sqrt());
        let got = stable_cdf(&levy, x).unwrap();
        assert!((got - want).abs() < 1e-6, "x={x}: {got} vs {want}");
    }
    assert!(stable_cdf(&levy, -1.0).unwrap().abs() < 1e-6);
    for x in [100.0f64, 1e3, 1e5] {
        let want = libm::erfc((1.0 / (2.0 * x)).sqrt());
        assert!((stable_cdf(&levy, x).unwrap() - want).abs() < 1e-6);
    }
}

#[test]
fn gaussian_reduction() {
    for b in [-1.0, 0.0, 0.7] {
        let params = StableParams::new(2.0, b, 1.5, 0.3).unwrap();
        for x in [-6.0, -2.0, -0.1, 0.3, 1.0, 4.0, 9.0] {
            // variance 2 σ²
            let want = 0.5 * libm::erfc(-(x - 0.3) / (2.0 * 1.5));
            let got = stable_cdf(&params, x).unwrap();
            assert!((got - want).abs() < 1e-6, "beta={b} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn cauchy_location_scale() {
    let c = StableParams::new(1.0, 0.0, 2.0, -1.0).unwrap();
    for x in [-300.0, -5.0, -1.0, 0.0, 3.0, 1e4] {
        let want = 0.5 + ((x + 1.0) / 2.0f64).atan() / std::f64::consts::PI;
        assert!((stable_cdf(&c, x).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn far_tail_limits() {
    for a in [1.6, 1.8, 2.0] {
        for b in [-1.0, 0.0, 1.0] {
            let params = StableParams::new(a, b, 2.0, 0.0).unwrap();
            assert!(stable_cdf(&params, -2e3).unwrap() < 1e-5);
            assert!(stable_cdf(&params, 2e3).unwrap() > 1.0 - 1e-5);
        }
    }
    // Pr(X < −x) ~ C_α (1 − β)/2 σ^α x^{−α} with
    // C_α = (1 − α) / (Γ(2 − α) cos(πα/2)).
    let (a, b, s, x) = (1.5f64, -1.0, 2.0f64, 2e3f64);
    let c_alpha = (1.0 - a) / (libm::tgamma(2.0 - a) * (std::f64::consts::PI * a / 2.0).cos());
    let asymptotic = c_alpha * (1.0 - b) / 2.0 * s.powf(a) * x.powf(-a);
    let got = stable_cdf(&StableParams::new(a, b, s, 0.0).unwrap(), -x).unwrap();
    assert!((got / asymptotic - 1.0).abs() < 0.01, "{got} vs {asymptotic}");
    // Below α ≈ 1.45 the tail at 10³σ is heavier than 1e−5; check the
    // exact Cauchy value instead.
    let cauchy = p(1.0, 0.0);
    let tail = 0.5 - (1e3f64).atan() / std::f64::consts::PI;
    assert!((stable_cdf(&cauchy, -1e3).unwrap() - tail).abs() < 1e-12);
}

#[test]
fn cdf_grid_is_monotone_with_small_cleanup() {
    let xs: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.25).collect();
    for &(a, b) in &[(0.7, 0.5), (1.0, 1.0), (1.3, -0.5), (1.8, 1.0)] {
        let t = stable_cdf_batch(&p(a, b), &xs).unwrap();
        assert!(t.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(t.cleanup < 1e-7, "a={a} b={b}: cleanup {}", t.cleanup);
        assert!(t.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}

#[test]
fn sampler_agrees_with_cdf() {
    let crit = kolmogorov_quantile(0.999) / (10_000f64).sqrt();
    for a in [0.7, 1.0, 1.3, 1.8] {
        for b in [0.0, 0.5, 1.0] {
            let params = StableParams::new(a, b, 1.3, 0.2).unwrap();
            let sample = sample_stable(&params, 10_000, 77);
            let ks = ks_against_stable(&sample, &params).unwrap();
            assert!(ks.statistic < crit, "a={a} b={b}: D = {}", ks.statistic);
        }
    }
}

#[test]
fn own_cdf_ks_at_99_percent() {
    let params = p(1.5, 0.0);
    let sample = sample_stable(&params, 10_000, 5);
    let d = ks_statistic(&sample, |x| stable_cdf(&params, x).unwrap()).unwrap();
    assert!(d <= 1.63 / 100.0, "{d}");
    let pruned = ks_against_stable(&sample, &params).unwrap();
    assert_eq!(pruned.statistic, d);
}

#[test]
fn levy_self_similarity() {
    // X(2T) has the law of 2^{1/α} X(T).
    let params = p(1.5, 0.5);
    let reps = 10_000;
    let a: Vec<f64> = (0..reps).map(|r| levy_path(&params, 4, 2.0, r).unwrap().end_value()).collect();
    let scale = 2f64.powf(1.0 / 1.5);
    let b: Vec<f64> =
        (0..reps).map(|r| scale * levy_path(&params, 4, 1.0, 1_000_000 + r).unwrap().end_value()).collect();
    let d = ks_two_sample(&a, &b).unwrap();
    let crit = kolmogorov_quantile(0.999) * (2.0 / reps as f64).sqrt();
    assert!(d < crit, "{d} vs {crit}");
}

#[test]
fn levy_block_increments_uncorrelated() {
    let params = p(2.0, 0.0);
    let reps = 5_000usize;
    let (mut sx, mut sy, mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for r in 0..reps {
        let path = levy_path(&params, 20, 1.0, r as u64).unwrap();
        let z = path.jump_sizes();
        let x: f64 = z[..10].iter().sum();
        let y: f64 = z[10..].iter().sum();
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    let n = reps as f64;
    let cov = sxy / n - sx / n * sy / n;
    let corr = cov / ((sxx / n - (sx / n).powi(2)) * (syy / n - (sy / n).powi(2))).sqrt();
    assert!(corr.abs() < 3.0 / n.sqrt(), "{corr}");
}
