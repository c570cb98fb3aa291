//! Draw Pareto-balanced innovations, compare the empirical tail with the
//! closed form and estimate the tail index with Hill's estimator.
//!
//!     cargo run --example innovations_tail -- 1.5

use fclt::innovations::{DistributionSpec, InnovationModel, MarkovVolatility};
use fclt::normalize::hill_alpha;

fn main() -> fclt::Result<()> {
    let alpha: f64 = std::env::args().nth(1).map_or(Ok(1.5), |a| a.parse()).expect("alpha must be a number");
    let iid = InnovationModel::iid(DistributionSpec::new(alpha, 0.7, 1.0)?);
    let draws = iid.sample_window(1, 1_000_000, 42)?;

    println!("{:>8} {:>12} {:>12}", "x", "empirical", "analytic");
    for x in [2.0, 4.0, 10.0, 100.0] {
        let emp = draws.iter().filter(|v| v.abs() > x).count() as f64 / draws.len() as f64;
        println!("{x:>8} {emp:>12.6} {:>12.6}", iid.tail_prob(x)?);
    }
    let positive = draws.iter().filter(|&&v| v > 0.0).count() as f64 / draws.len() as f64;
    println!("fraction positive {positive:.4} (balance 0.7)");
    for k in [500, 2000, 10_000] {
        println!("hill(k = {k}) = {:.4}", hill_alpha(&draws, k)?);
    }

    // Volatility clustering: same marginal tail shape, clustered extremes.
    let chain = MarkovVolatility::new(vec![0.3, 4.0], vec![vec![0.98, 0.02], vec![0.1, 0.9]])?;
    let clustered = InnovationModel::markov_volatility(DistributionSpec::symmetric(alpha)?, chain);
    let w = clustered.sample_window(1, 200_000, 7)?;
    let u = 8.0;
    let p = clustered.tail_prob(u)?;
    let joint = w.windows(2).filter(|p| p[0].abs() > u && p[1].abs() > u).count() as f64 / w.len() as f64;
    println!("markov volatility: Pr(|ξ| > {u}) = {p:.5}, joint consecutive {joint:.6} vs independent {:.6}", p * p);
    Ok(())
}
