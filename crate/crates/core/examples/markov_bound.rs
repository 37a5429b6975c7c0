// The non-decreasing upper bound g1(δ) against the actual error. The bound
// is tight for windows of length ≥ p; for shorter windows it sits above the
// curve wherever the curve dips.
//
//     cargo run -p infoaging --example markov_bound

use infoaging::{ArModel, JointIndexSet, LogBase, Loss, SourceStats};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let stats = SourceStats::from_model(&ArModel::seasonal_ar4(), 40)?;
    let delta_max = 12;

    for l in [1, 4] {
        let h = stats.entropy_curve(Loss::Log, l, delta_max, LogBase::Two)?;
        let g1 = stats.g1_curve(Loss::Log, l, delta_max, LogBase::Two)?;
        println!("l={l}: delta  H (bits)   g1 (bits)  gap");
        for ((d, hv), (_, gv)) in h.points.iter().zip(&g1.points) {
            println!("      {d:5}  {hv:9.5}  {gv:9.5}  {:.2e}", gv - hv);
        }
    }

    // one telescoping step by hand: the information the newer window adds
    let newer = JointIndexSet::window(4, 1);
    let older = JointIndexSet::window(5, 1);
    let step = stats.cmi(Loss::Log, &older, &newer, LogBase::Two)?;
    println!("I(Y; X_t-4 | X_t-5) = {step:.5} bits");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
