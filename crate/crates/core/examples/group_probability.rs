//! Averages the complexity probability of several personal models from one
//! band, the way the service answers `/group/probability`.
//!
//! cargo run --release --example group_probability -- [models]

use perscwi::dataset::Dataset;
use perscwi::downstream::{group_complexity_probability, group_decision};
use perscwi::lexicon::CefrLevel;
use perscwi::profile::Proficiency;
use perscwi::session::{SessionConfig, SessionId};
use perscwi::simulation::{run_session, Oracle, OracleSpec, ThresholdOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(5);
    let data = Dataset::bundled()?;
    let pool = data.resources.pool();
    let graded = data.graded.as_ref().expect("bundled graded lexicon");
    let mut models = Vec::new();
    for i in 0..n {
        let cutoff = -0.3 + 0.6 * i as f64 / n.max(2) as f64;
        let mut spec = OracleSpec::threshold(ThresholdOracle::frequency_cut(cutoff, 0.05));
        spec.proficiency = Some(Proficiency::Advanced);
        let mut oracle = Oracle::new(spec, pool, None, i as u64)?;
        let config = SessionConfig {
            rng_seed: i as u64,
            ..SessionConfig::default()
        };
        let session = run_session(data.resources.clone(), config, &mut oracle, SessionId(format!("advanced-{i}")))?;
        models.push(session.model().clone());
    }
    let refs: Vec<_> = models.iter().collect();
    println!("{n} advanced models");
    println!("{:<5} {:<16} {:>8}  decision", "level", "word", "p");
    for level in [CefrLevel::A1, CefrLevel::B1, CefrLevel::C1] {
        let words = graded.iter().filter(|(w, _)| graded.argmax_level(w) == Some(level) && pool.get(w).is_some()).take(4);
        for (w, _) in words {
            let p = group_complexity_probability(&refs, pool.features(w)?)?;
            println!("{:<5} {:<16} {:>8.3}  {}", level.to_string(), w, p, if group_decision(p).is_complex() { "complex" } else { "simple" });
        }
    }
    Ok(())
}
