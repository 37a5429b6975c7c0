// Estimation error against age of information for several window lengths,
// under both quadratic and log loss. Short windows give curves that dip as the
// age grows; windows covering the model order never do.
//
//     cargo run -p infoaging --example entropy_curve

use infoaging::{ArModel, LogBase, Loss, SourceStats};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = ArModel::seasonal_ar4();
    let stats = SourceStats::from_model(&model, 40)?;
    let delta_max = 12;

    for (loss, base) in [(Loss::Quadratic, LogBase::Natural), (Loss::Log, LogBase::Two)] {
        println!("{loss} loss");
        let curves = (1..=5)
            .map(|l| stats.entropy_curve(loss, l, delta_max, base))
            .collect::<Result<Vec<_>, _>>()?;
        print!("delta");
        for c in &curves {
            print!("  {:>9}", format!("l={}", c.l));
        }
        println!();
        for d in 0..=delta_max {
            print!("{d:5}");
            for c in &curves {
                print!("  {:9.5}", c.points[d].1);
            }
            println!();
        }
        for c in &curves {
            println!("l={} largest drop with age: {:.3e}", c.l, c.max_drop().max(0.0));
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
