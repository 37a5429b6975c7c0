// How far is each window from being a sufficient statistic? ε(l) is zero once
// the window covers the model order.
//
//     cargo run -p infoaging --example epsilon_markov

use infoaging::epsilon::certify_markov_windows;
use infoaging::{epsilon_l, ArModel, EpsilonQuery, LogBase, SourceStats};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = ArModel::seasonal_ar4();
    let bound = 20;
    let stats = SourceStats::from_model(&model, 2 * bound + 6)?;

    println!("   l   eps(nats)   eps(bits)  argmax (mu, nu)");
    for l in 1..=6 {
        let nat = epsilon_l(&stats, &EpsilonQuery::new(l, bound, LogBase::Natural))?;
        let bits = epsilon_l(&stats, &EpsilonQuery::new(l, bound, LogBase::Two))?;
        println!("{l:4}  {:10.6}  {:10.6}  ({}, {})", nat.epsilon, bits.epsilon, nat.argmax_mu, nat.argmax_nu);
    }

    for check in certify_markov_windows(&model, 6, bound)? {
        println!("l={} eps={:.2e} pass={}", check.l, check.epsilon, check.pass);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
