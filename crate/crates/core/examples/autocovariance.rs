// Load a model file, check stationarity and print its autocovariance.
//
//     cargo run -p infoaging --example autocovariance

use infoaging::{autocovariance, validate_model, ArModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ar4.json");
    let model = ArModel::from_path(path)?;
    let report = validate_model(&model)?;
    println!("order {} stationary {}", model.order(), report.stationary);
    println!("companion root magnitudes: {:.4?}", report.root_magnitudes);

    let acf = autocovariance(&model, 12)?;
    for (k, g) in acf.as_slice().iter().enumerate() {
        println!("gamma({k:2}) = {g:.6}");
    }
    println!("E[Y^2] = {:.6}", acf.variance() + model.sigma2_n());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
