//! Event-log round trip: run a session, write its JSONL log, cut the log
//! mid-step as a crash would, then replay what survives.
//!
//! cargo run --release --example replay_session

use perscwi::dataset::Dataset;
use perscwi::model::export_model;
use perscwi::profile::{AnnotatorProfile, Proficiency};
use perscwi::session::{read_events, stable_prefix, write_events, Clock, Session, SessionConfig, SessionId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Dataset::bundled()?;
    let mut session = Session::create(
        data.resources.clone(),
        SessionConfig {
            rng_seed: 3,
            ..SessionConfig::default()
        },
        AnnotatorProfile::new(Proficiency::NearNative),
        SessionId("replay-demo".into()),
        Clock::Logical,
    )?;
    while let Some(w) = session.current_query().map(str::to_string) {
        let knows = w.len() < 8;
        session.submit_annotation(&w, knows)?;
    }
    let mut log = Vec::new();
    write_events(&mut log, session.events())?;
    println!("{} events, {} bytes of JSONL", session.events().len(), log.len());

    let events = read_events(log.as_slice())?;
    let replayed = Session::replay(data.resources.clone(), &events)?;
    let same = export_model(&replayed.export()) == export_model(&session.export());
    println!("full replay reproduces the exported model byte for byte: {same}");

    // a crash after the 10th answer was logged but before its refit
    let cut = events
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind.name() == "annotation_received")
        .nth(9)
        .map(|(i, _)| i + 2)
        .expect("ten answers");
    let stable = stable_prefix(&events[..cut]);
    let resumed = Session::replay(data.resources.clone(), stable)?;
    println!(
        "crash at event {cut}: kept {} events, session resumes at item {:?} (model version {})",
        stable.len(),
        resumed.current_item().map(|i| i.item_number),
        resumed.model().version
    );
    Ok(())
}
