//! Compares active learning, cluster-random and random sampling with
//! simulated threshold annotators on the bundled pool.
//!
//! cargo run --release --example simulate_strategies -- [oracles] [noise]

use perscwi::dataset::Dataset;
use perscwi::session::SessionConfig;
use perscwi::simulation::{strategy_study, OracleFamily, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let oracles: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(20);
    let noise: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.1);
    let data = Dataset::bundled()?;
    let family = OracleFamily {
        noise_rate: noise,
        ..OracleFamily::default()
    };
    let started = std::time::Instant::now();
    let study = strategy_study(
        data.resources.clone(),
        data.graded.as_ref(),
        &family,
        &Strategy::ALL,
        oracles,
        &SessionConfig::default(),
        42,
    )?;
    println!("{:<16} {:>8} {:>8} {:>8}", "strategy", "macro-F", "F(cx)", "kappa");
    for s in &study.summaries {
        println!("{:<16} {:>8.3} {:>8.3} {:>8.3}", s.strategy.as_str(), s.mean_f, s.mean_f_complex, s.mean_kappa);
    }
    println!("{} runs in {:.1?}", study.runs.len(), started.elapsed());
    Ok(())
}
