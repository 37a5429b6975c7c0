// Simulate the source and compare least-squares error with the closed form.
//
//     cargo run --release -p infoaging --example oracle_validation

use infoaging::oracle::DEFAULT_BURN_IN;
use infoaging::{cross_check, empirical_acf, simulate, ArModel, SourceStats};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = ArModel::seasonal_ar4();
    let stats = SourceStats::from_model(&model, 40)?;
    let traj = simulate(&model, 200_000, DEFAULT_BURN_IN, 42)?;

    let acf = empirical_acf(&traj, 4)?;
    for (k, g) in acf.gamma.iter().enumerate() {
        println!("gamma({k}) closed {:.5} empirical {g:.5}", stats.acf().gamma(k));
    }

    let grid = [(0, 1), (1, 1), (4, 2), (8, 4), (12, 1)];
    let rows = cross_check(&traj, &grid, |d, l| stats.h2_conditional(d, l))?;
    println!("delta  l  closed     empirical  z");
    for r in rows {
        println!("{:5} {:2}  {:.6}  {:.6}  {:+.2}", r.delta, r.l, r.closed_form, r.empirical, r.z);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
