//! Build a two-sided linear process, its normalized partial-sum path and the
//! coupled truncated approximations.

use fclt::innovations::{DistributionSpec, InnovationModel};
use fclt::linproc::{approximation_gap, choose_truncation, total_mass, CoefficientSeq, LinearProcess};
use fclt::normalize::{bn_analytic, cn_analytic};

fn main() -> fclt::Result<()> {
    let model = InnovationModel::iid(DistributionSpec::new(1.5, 0.8, 1.0)?);
    let seq = CoefficientSeq::Geometric { c: 1.0, rho: 0.6 };
    let k = choose_truncation(&seq, 1.0, 1e-10)?;
    println!("truncation K = {k}, A = {:.6}, A_K = {:.6}", total_mass(&seq, None)?, total_mass(&seq, Some(k))?);

    let n = 5000;
    let (b, c) = (bn_analytic(&model, n as u64), cn_analytic(&model, n as u64)?);
    let process = LinearProcess::new(model, seq, k)?;
    let seed = 2024;
    let full = process.path(n, b, c, 1.0, seed)?;
    println!("X_n(1) = {:.5} with {} jumps", full.end_value(), full.num_jumps());

    for m in [0, 1, 2, 4, 8, 16, 32, k] {
        let approx = process.truncated_path(m, n, b, c, 1.0, seed)?;
        println!("m = {m:>3}: sup |X_n − X_n^(m)| = {:.3e}", approximation_gap(&full, &approx, 1.0)?);
    }

    let series = process.series(20, seed)?;
    series.write_csv(std::io::stdout())?;
    Ok(())
}
