//! Ward clustering of the bundled pool, with per-cluster CEFR level mix.
//!
//! cargo run --release --example build_clusters -- [k]

use std::collections::HashMap;

use perscwi::clustering::{build_clusters, cluster_diagnostics, DEFAULT_K};
use perscwi::dataset::bundled_paths;
use perscwi::lexicon::{ingest_pool, GradedLexicon, PoolSchema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(DEFAULT_K);
    let paths = bundled_paths();
    let pool = ingest_pool(&paths.pool, &PoolSchema::default())?;
    let started = std::time::Instant::now();
    let index = build_clusters(&pool, k)?;
    println!("k = {k} over {} words in {:.1?}", pool.len(), started.elapsed());

    let graded = GradedLexicon::read(paths.graded.as_ref().expect("bundled graded lexicon"))?;
    let votes: HashMap<String, u32> = pool
        .records()
        .iter()
        .filter_map(|r| r.seed_complexity_votes.map(|v| (r.word.clone(), v)))
        .collect();
    let diag = cluster_diagnostics(&index, &graded, &votes);
    println!("{:>7} {:>6}  {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}  example words", "cluster", "size", "A1", "A2", "B1", "B2", "C1", "votes");
    for (c, summary) in diag.clusters.iter().enumerate() {
        let words: Vec<&str> = index.members(c).into_iter().take(4).collect();
        let levels: Vec<String> = summary.mean_level_frequency.iter().map(|f| format!("{f:>6.2}")).collect();
        println!("{c:>7} {:>6}  {} {:>6.2}  {}", summary.size, levels.join(" "), summary.mean_votes, words.join(", "));
    }
    Ok(())
}
