//! Scores personal models against the all-simple, group-average and
//! frequency baselines. Annotators are simulated, six per proficiency band,
//! and their (noisy) test answers serve as gold.
//!
//! cargo run --release --example evaluate_baselines

use std::collections::HashMap;

use perscwi::dataset::Dataset;
use perscwi::label::Label;
use perscwi::metrics::{
    baseline_all_simple, baseline_frequency, baseline_group_average, sweep_frequency_threshold, EvaluationReport, LabelledTestSet,
};
use perscwi::model::PersonalModel;
use perscwi::session::{SessionConfig, SessionId};
use perscwi::simulation::{default_bands, run_session, Oracle, OracleSpec, ThresholdOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Dataset::bundled()?;
    let pool = data.resources.pool();
    let mut annotators: Vec<(String, &'static str, PersonalModel, LabelledTestSet)> = Vec::new();
    for (b, band) in default_bands().iter().enumerate() {
        for i in 0..6 {
            let seed = (b * 100 + i) as u64;
            let cutoff = band.cutoff_min + (band.cutoff_max - band.cutoff_min) * (i as f64 + 0.5) / 6.0;
            let mut spec = OracleSpec::threshold(ThresholdOracle::frequency_cut(cutoff, 0.05));
            spec.proficiency = Some(band.proficiency);
            let mut oracle = Oracle::new(spec, pool, None, seed)?;
            let config = SessionConfig {
                rng_seed: seed,
                ..SessionConfig::default()
            };
            let name = format!("{}-{i}", band.proficiency.as_str());
            let session = run_session(data.resources.clone(), config, &mut oracle, SessionId(name.clone()))?;
            let items = session.test_answers().iter().map(|(w, knows)| (w.clone(), Label::complex_if(!knows))).collect();
            let set = LabelledTestSet::new(name.clone(), items)?;
            annotators.push((name, band.proficiency.as_str(), session.model().clone(), set));
        }
    }

    let frequency: HashMap<String, f64> = pool.records().iter().map(|r| (r.word.clone(), r.frequency)).collect();
    let mut report = EvaluationReport::new();
    for (name, group, model, target) in &annotators {
        let words = target.words();
        let gold = target.gold();
        let mut pred = Vec::with_capacity(words.len());
        for w in &words {
            pred.push(model.predict(pool.features(w)?)?);
        }
        report.add("model", group, &pred, &gold)?;
        report.add("all_simple", group, &baseline_all_simple(gold.len()), &gold)?;
        let peers: Vec<LabelledTestSet> = annotators.iter().filter(|a| a.1 == *group).map(|a| a.3.clone()).collect();
        report.add("group_average", group, &baseline_group_average(&peers, target).labels, &gold)?;
        let others: Vec<LabelledTestSet> = annotators.iter().filter(|a| &a.0 != name).map(|a| a.3.clone()).collect();
        let t = sweep_frequency_threshold(&frequency, &others);
        report.add("frequency", group, &baseline_frequency(&frequency, t, &words), &gold)?;
    }
    report.write_csv(std::io::stdout().lock())?;
    Ok(())
}
