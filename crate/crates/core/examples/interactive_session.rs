//! One annotation session on the bundled pool. By default a simulated
//! annotator answers; with `--stdin` you answer each word yourself (y/n).
//!
//! cargo run --release --example interactive_session -- [--stdin]

use std::io::{BufRead, Write};

use perscwi::dataset::Dataset;
use perscwi::profile::{AnnotatorProfile, Proficiency};
use perscwi::session::{Clock, Session, SessionConfig, SessionId};
use perscwi::simulation::{Oracle, OracleSpec, ThresholdOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let human = std::env::args().any(|a| a == "--stdin");
    let data = Dataset::bundled()?;
    let config = SessionConfig {
        rng_seed: 7,
        ..SessionConfig::default()
    };
    let mut session = Session::create(
        data.resources.clone(),
        config,
        AnnotatorProfile::new(Proficiency::Advanced),
        SessionId::random(),
        Clock::System,
    )?;
    let mut oracle = Oracle::new(
        OracleSpec::threshold(ThresholdOracle::frequency_cut(0.0, 0.05)),
        data.resources.pool(),
        None,
        7,
    )?;
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    while let Some(item) = session.current_item() {
        let knows = if human {
            print!("[{}/{}] can you define {:?}? [y/n] ", item.item_number, item.total_items, item.word);
            std::io::stdout().flush()?;
            let line = lines.next().transpose()?.unwrap_or_default();
            line.trim().eq_ignore_ascii_case("y")
        } else {
            let k = oracle.answer(&item.word)?;
            println!("[{:>2}/{}] {:<16} {}", item.item_number, item.total_items, item.word, if k { "known" } else { "unknown" });
            k
        };
        let started = std::time::Instant::now();
        session.submit_annotation(&item.word, knows)?;
        if item.item_number <= session.config().budget {
            println!("        refit to version {} in {:.1?}", session.model().version, started.elapsed());
        }
    }
    let m = session.model();
    println!("final model: bias {:+.3}, weights {:?}", m.bias, m.weights.iter().map(|w| format!("{w:+.3}")).collect::<Vec<_>>());
    let test_hits = session
        .test_answers()
        .iter()
        .filter(|(w, knows)| {
            let x = data.resources.pool().features(w).expect("test words are pool words");
            m.predict(x).map(|l| l.is_complex() != *knows).unwrap_or(false)
        })
        .count();
    println!("model agrees with {test_hits} of {} test answers", session.test_answers().len());
    Ok(())
}
