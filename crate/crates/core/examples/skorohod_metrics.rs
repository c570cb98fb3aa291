//! Uniform, J1 and M1 distances and moduli on small hand-built paths.

use fclt::cadlag::{
    completed_graph, j1_distance, j1_modulus, m1_distance, m1_modulus, split_jump_statistic, uniform_distance,
    StepPath,
};

fn show(label: &str, x: &StepPath, y: &StepPath) -> fclt::Result<()> {
    println!(
        "{label:<28} uniform {:.4}  J1 {:.4}  M1 {:.4}",
        uniform_distance(x, y)?,
        j1_distance(x, y)?,
        m1_distance(x, y, 1e-6)?
    );
    Ok(())
}

fn main() -> fclt::Result<()> {
    let unit = StepPath::new(1.0, 0.0, vec![(0.5, 1.0)])?;
    let shifted = StepPath::new(1.0, 0.0, vec![(0.52, 1.0)])?;
    let split = StepPath::new(1.0, 0.0, vec![(0.5, 0.5), (0.501, 0.5)])?;
    let overshoot = StepPath::new(1.0, 0.0, vec![(0.5, 1.0), (0.501, -1.0)])?;

    show("shifted jump", &unit, &shifted)?;
    show("jump split in two halves", &unit, &split)?;
    show("jump with overshoot", &unit, &overshoot)?;

    println!("completed graph of the split path:");
    for (t, v) in completed_graph(&split).vertices() {
        println!("  ({t}, {v})");
    }

    let delta = 0.01;
    for (name, p) in [("split", &split), ("overshoot", &overshoot)] {
        println!(
            "{name:<10} split statistic {:.3}  J1 modulus {:.3}  M1 modulus {:.3}",
            split_jump_statistic(p, delta),
            j1_modulus(p, delta),
            m1_modulus(p, delta)
        );
    }

    let mut csv = Vec::new();
    split.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
