mod common;

use common::log_simpson;
use fclt::innovations::{DistributionSpec, InnovationModel};
use fclt::normalize::{
    bn_analytic, bn_empirical, centering_constants, check_conditions_abn, cn_analytic, hill_alpha, karamata_ratio,
    NormalizationSeq,
};
use proptest::prelude::*;

fn pareto(alpha: f64, p: f64) -> InnovationModel {
    InnovationModel::iid(DistributionSpec::new(alpha, p, 1.0).unwrap())
}

#[test]
fn centering_matches_quadrature() {
    let m = pareto(1.5, 1.0);
    let b = bn_analytic(&m, 16);
    assert!((b - 16f64.powf(2.0 / 3.0)).abs() < 1e-12);
    let quad = log_simpson(|y| y * 1.5 * y.powf(-2.5), 1.0, b, 4000);
    let c = cn_analytic(&m, 16).unwrap();
    assert!((c - quad).abs() < 1e-9 && (c - 1.80944).abs() < 1e-5, "{c} vs {quad}");

    let m = pareto(0.5, 1.0);
    assert!((bn_analytic(&m, 4) - 16.0).abs() < 1e-12);
    let quad = log_simpson(|y| y * 0.5 * y.powf(-1.5), 1.0, 16.0, 4000);
    assert!((cn_analytic(&m, 4).unwrap() - 3.0).abs() < 1e-12);
    assert!((quad - 3.0).abs() < 1e-9);
}

#[test]
fn one_sided_centering_remainder_is_constant() {
    // b_n = n^{2/3}, so n b_n^{-1} (c_n − 3) = −3 n b_n^{-3/2} = −3.
    let m = pareto(1.5, 1.0);
    for n in [2u64, 10, 1000, 1_000_000] {
        let (c, ct) = centering_constants(&m, n).unwrap();
        assert_eq!(c, 3.0);
        assert!((ct + 3.0).abs() < 1e-9, "n = {n}: {ct}");
        let seq = NormalizationSeq::analytic(&m, n).unwrap();
        assert_eq!(seq.c_tilde, Some(ct));
    }
}

#[test]
fn karamata_closed_forms() {
    let m = pareto(1.5, 0.5);
    // x^{1} · 3 x^{-1/2} / (3 (x^{1/2} − 1)) = x^{1/2} / (x^{1/2} − 1).
    for x in [16.0f64, 1e4, 1e6] {
        let closed = x.sqrt() / (x.sqrt() - 1.0);
        assert!((karamata_ratio(&m, 1.0, x).unwrap() - closed).abs() < 1e-12);
    }
    assert!((karamata_ratio(&m, 1.0, 16.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn condition_report_closed_forms() {
    let report = check_conditions_abn(&pareto(1.5, 0.5), &[100, 1000, 10_000]).unwrap();
    for row in &report.rows {
        let closed = 3.0 * (1.0 - (row.n as f64).powf(-1.0 / 3.0));
        assert!((row.second_moment_ratio - closed).abs() < 1e-10);
        assert!(row.second_moment_ratio < 3.0);
        assert_eq!(row.c_n_over_b_n, 0.0);
    }
    assert!(report.b_n_increasing);
    assert!(report.rows.windows(2).all(|w| w[1].second_moment_ratio > w[0].second_moment_ratio));

    // α = 1/2, p = 1: c_n = b_n^{1/2} − 1 = n − 1 and b_n = n², so n c_n / b_n = (n − 1)/n.
    let report = check_conditions_abn(&pareto(0.5, 1.0), &[10_000]).unwrap();
    let r = report.rows[0].n_cn_over_bn();
    assert!((r - 0.9999).abs() < 1e-12, "{r}");
}

#[test]
fn empirical_quantile_tracks_analytic() {
    let m = pareto(1.5, 0.5);
    let n = 10_000u64;
    let target = (n as f64).powf(2.0 / 3.0);
    let mut rel = Vec::new();
    for seed in 0..20 {
        let w = m.sample_window(1, 1_000_000, seed).unwrap();
        rel.push(bn_empirical(&w, n).unwrap() / target - 1.0);
    }
    let mean = rel.iter().sum::<f64>() / rel.len() as f64;
    assert!(mean.abs() < 0.10, "mean relative error {mean}, per seed {rel:?}");
}

#[test]
fn hill_on_geometric_spacings() {
    // Top k + 1 = 11 values e^10..e^0: mean log excess (10 + ... + 1)/10 = 5.5.
    let sample: Vec<f64> = (0..=10).map(|j| (j as f64).exp()).collect();
    assert!((hill_alpha(&sample, 10).unwrap() - 2.0 / 11.0).abs() < 1e-12);
    // With k = 1 the estimate is the reciprocal of the top log spacing.
    let alpha = 1.7;
    let sample: Vec<f64> = (0..=50).map(|j| (j as f64 / alpha).exp()).collect();
    assert!((hill_alpha(&sample, 1).unwrap() - alpha).abs() < 1e-12);
}

#[test]
fn hill_recovers_tail_index() {
    let m = pareto(1.5, 0.5);
    for seed in 0..20 {
        let w = m.sample_window(1, 100_000, seed).unwrap();
        let a = hill_alpha(&w, 2000).unwrap();
        assert!((1.35..=1.65).contains(&a), "seed {seed}: {a}");
    }
}

proptest! {
    #[test]
    fn bn_inverts_the_tail(alpha in 0.2f64..2.0, scale in 0.1f64..10.0, n in 2u64..1_000_000_000) {
        let m = InnovationModel::iid(DistributionSpec::new(alpha, 0.5, scale).unwrap());
        let b = bn_analytic(&m, n);
        let tail = m.tail_prob(b).unwrap();
        prop_assert!((tail * n as f64 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empirical_quantile_is_a_sample_order_statistic(
        sample in prop::collection::vec(-1e3f64..1e3, 1..200), n in 2u64..50
    ) {
        let b = bn_empirical(&sample, n).unwrap();
        prop_assert!(sample.iter().any(|x| x.abs() == b));
        let level = (n - 1) as f64 / n as f64;
        let at_or_below = sample.iter().filter(|x| x.abs() <= b).count() as f64 / sample.len() as f64;
        let strictly_below = sample.iter().filter(|x| x.abs() < b).count() as f64 / sample.len() as f64;
        prop_assert!(at_or_below >= level - 1e-12);
        prop_assert!(strictly_below < level + 1e-12);
    }

    #[test]
    fn hill_is_scale_invariant(
        sample in prop::collection::vec(1.0f64..1e6, 20..100), lambda in 0.01f64..100.0, k in 1usize..19
    ) {
        let scaled: Vec<f64> = sample.iter().map(|x| x * lambda).collect();
        match (hill_alpha(&sample, k), hill_alpha(&scaled, k)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-6 * a),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }
}
