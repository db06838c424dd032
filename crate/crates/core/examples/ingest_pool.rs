//! Ingests a pool TSV and prints what normalization did to it.
//!
//! cargo run --example ingest_pool -- [pool.tsv]

use perscwi::dataset::bundled_paths;
use perscwi::lexicon::{ingest_pool, PoolSchema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| bundled_paths().pool);
    let pool = ingest_pool(&path, &PoolSchema::default())?;
    let stats = pool.stats();
    println!("{} words, d = {}, sha256 {}", pool.len(), pool.dim(), &stats.content_hash[..16]);
    println!("{:<14} {:>10} {:>10}", "feature", "mean", "std");
    for ((name, mean), std) in stats.feature_names.iter().zip(&stats.mean).zip(&stats.std) {
        println!("{name:<14} {mean:>10.3} {std:>10.3}");
    }
    println!("{} ingestion diagnostics", pool.diagnostics().len());
    for d in pool.diagnostics().iter().take(5) {
        println!("  {}", serde_json::to_string(d)?);
    }
    for e in pool.entries().iter().take(5) {
        let z: Vec<String> = e.features.iter().map(|v| format!("{v:+.2}")).collect();
        println!("{:<14} {}", e.word, z.join(" "));
    }
    Ok(())
}
