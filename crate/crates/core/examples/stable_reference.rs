//! Stable distribution reference: CDF evaluation, sampling and KS checks.

use fclt::special::kolmogorov_quantile;
use fclt::stable::{ks_against_stable, levy_path, sample_stable, stable_cdf, stable_cdf_batch, StableParams};

fn main() -> fclt::Result<()> {
    let xs: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.5).collect();
    for (alpha, beta) in [(1.5, 0.0), (1.5, 1.0), (0.7, 0.5), (1.0, 0.0)] {
        let params = StableParams::standard(alpha, beta)?;
        let table = stable_cdf_batch(&params, &xs)?;
        println!(
            "alpha {alpha} beta {beta}: F(-5) = {:.6}  F(0) = {:.6}  F(5) = {:.6}  cleanup {:.1e}",
            stable_cdf(&params, -5.0)?,
            stable_cdf(&params, 0.0)?,
            stable_cdf(&params, 5.0)?,
            table.cleanup
        );
        let sample = sample_stable(&params, 10_000, 99);
        let ks = ks_against_stable(&sample, &params)?;
        println!(
            "    KS of 10^4 draws: {:.4} (99.9% point {:.4})",
            ks.statistic,
            kolmogorov_quantile(0.999) / 100.0
        );
    }

    let path = levy_path(&StableParams::standard(1.2, 0.0)?, 1000, 1.0, 5)?;
    println!("Lévy path: {} jumps, X(1) = {:.4}", path.num_jumps(), path.end_value());
    Ok(())
}
