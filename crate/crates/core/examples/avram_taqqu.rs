//! Filtering by a_0 = a_1 = 1/2 splits every big jump into two half jumps one
//! step apart. The split statistic and J1 modulus stay large as n grows while
//! the M1 modulus shrinks, so convergence can hold in M1 but not in J1.

use fclt::cadlag::{j1_modulus, m1_modulus, split_jump_statistic};
use fclt::innovations::{DistributionSpec, InnovationModel};
use fclt::linproc::{CoefficientSeq, LinearProcess};
use fclt::normalize::{bn_analytic, cn_analytic};
use fclt::rng::replica_seed;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn main() -> fclt::Result<()> {
    let model = InnovationModel::iid(DistributionSpec::symmetric(1.2)?);
    let moving_average = CoefficientSeq::FiniteList { first_index: 0, values: vec![0.5, 0.5] };
    let process = LinearProcess::new(model.clone(), moving_average, 1)?;
    let identity = LinearProcess::new(model.clone(), CoefficientSeq::identity(), 0)?;

    println!("{:>7} {:>10} {:>10} {:>10} {:>14}", "n", "split", "J1 mod", "M1 mod", "split (iid)");
    for n in [1_000usize, 10_000, 50_000] {
        let (b, c) = (bn_analytic(&model, n as u64), cn_analytic(&model, n as u64)?);
        let window = 2.0 / n as f64;
        let (mut split, mut j1, mut m1, mut control) = (vec![], vec![], vec![], vec![]);
        for r in 0..100 {
            let seed = replica_seed(1, r);
            let p = process.path(n, b, c, 1.0, seed)?;
            split.push(split_jump_statistic(&p, window));
            j1.push(j1_modulus(&p, window));
            m1.push(m1_modulus(&p, window));
            control.push(split_jump_statistic(&identity.path(n, b, c, 1.0, seed)?, window));
        }
        println!(
            "{n:>7} {:>10.4} {:>10.4} {:>10.4} {:>14.4}",
            median(split),
            median(j1),
            median(m1),
            median(control)
        );
    }
    Ok(())
}
