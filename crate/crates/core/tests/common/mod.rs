#![allow(dead_code)]

use std::sync::Arc;

use perscwi::clustering::build_clusters;
use perscwi::lexicon::{binarize_seed_label, pool_from_records, GradedLexicon};
use perscwi::session::SessionResources;
use perscwi::synthetic::{generate, SyntheticConfig, SyntheticData};

pub fn small_config(seed: u64) -> SyntheticConfig {
    SyntheticConfig {
        pool_size: 600,
        graded_pool_words: 450,
        graded_extra_words: 30,
        seed_count: 40,
        test_count: 12,
        seed,
    }
}

pub struct Small {
    pub data: SyntheticData,
    pub resources: Arc<SessionResources>,
    pub graded: GradedLexicon,
}

/// A 600-word synthetic dataset clustered with k = 4.
pub fn small(seed: u64) -> Small {
    let data = generate(&small_config(seed));
    let pool = pool_from_records(data.records.clone(), format!("small-{seed}")).unwrap();
    let clusters = build_clusters(&pool, 4).unwrap();
    let seeds = data
        .seeds
        .iter()
        .map(|(w, v)| (w.clone(), binarize_seed_label(i64::from(*v), 1).unwrap()))
        .collect();
    let resources = SessionResources::new(pool, clusters, seeds, data.test_words.clone()).unwrap();
    let graded = GradedLexicon::from_entries(data.graded.clone()).unwrap();
    Small {
        data,
        resources: Arc::new(resources),
        graded,
    }
}
