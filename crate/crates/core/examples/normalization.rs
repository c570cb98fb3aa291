//! Normalizing constants b_n, c_n and the finite-n diagnostics behind them.

use fclt::innovations::{DistributionSpec, InnovationModel};
use fclt::normalize::{bn_analytic, check_conditions_abn, karamata_ratio, NormalizationSeq};

fn main() -> fclt::Result<()> {
    let sym = InnovationModel::iid(DistributionSpec::symmetric(1.5)?);
    let skew = InnovationModel::iid(DistributionSpec::new(1.5, 1.0, 1.0)?);

    println!("{:>10} {:>12} {:>12} {:>10} {:>10}", "n", "b_n", "c_n", "c", "c_tilde");
    for n in [10u64, 1_000, 100_000, 10_000_000] {
        let s = NormalizationSeq::analytic(&skew, n)?;
        println!(
            "{n:>10} {:>12.4} {:>12.6} {:>10.4} {:>10.6}",
            s.b_n,
            s.c_n,
            s.c.unwrap(),
            s.c_tilde.unwrap()
        );
    }

    let sample = sym.sample_window(1, 1_000_000, 1)?;
    let n = 10_000;
    let plug_in = NormalizationSeq::empirical(&sample, n)?;
    println!(
        "plug-in at n = {n}: b_n = {:.3} (analytic {:.3}), c_n = {:.5}",
        plug_in.b_n,
        bn_analytic(&sym, n),
        plug_in.c_n
    );

    let report = check_conditions_abn(&sym, &[100, 10_000, 1_000_000])?;
    report.write_csv(std::io::stdout())?;
    println!("b_n increasing: {}, max n b_n^-2 E(ξ² I) = {:.6}", report.b_n_increasing, report.max_second_moment_ratio);

    for x in [1e2, 1e4, 1e8] {
        println!("karamata ratio beta = 1 at x = {x:e}: {:.8} (limit 1)", karamata_ratio(&sym, 1.0, x)?);
    }
    Ok(())
}
