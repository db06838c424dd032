//! Trains simulated annotators in three proficiency bands, counts the graded
//! words each model calls complex per CEFR level, then predicts the band
//! from the C1 count alone.
//!
//! cargo run --release --example proficiency_study -- [models_per_band]

use perscwi::dataset::Dataset;
use perscwi::downstream::predict_proficiency;
use perscwi::session::SessionConfig;
use perscwi::simulation::{default_bands, proficiency_band_study};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let per_band: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(20);
    let data = Dataset::bundled()?;
    let graded = data.graded.as_ref().expect("bundled graded lexicon");
    let study = proficiency_band_study(
        data.resources.clone(),
        graded,
        &default_bands(),
        per_band,
        0.05,
        &SessionConfig::default(),
        1,
    )?;
    println!("{:<14} {:>7} {:>7} {:>7} {:>7} {:>7}", "band", "A1", "A2", "B1", "B2", "C1");
    for (band, counts) in study.bands.iter().zip(&study.mean_counts) {
        let cells: Vec<String> = counts.iter().map(|c| format!("{c:>7.1}")).collect();
        println!("{:<14} {}", band.title(), cells.join(" "));
    }
    let report = predict_proficiency(&study.c1_samples(), 5)?;
    println!(
        "band from C1 count: weighted precision {:.3}, macro precision {:.3}, accuracy {:.3}",
        report.weighted_precision, report.macro_precision, report.accuracy
    );
    Ok(())
}
