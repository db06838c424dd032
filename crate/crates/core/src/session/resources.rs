use std::io::Write;
use std::path::Path;

use crate::clustering::ClusterIndex;
use crate::label::Label;
use crate::lexicon::{binarize_seed_label, Pool, Provenance};
use crate::model::{LabelSource, LabeledInstance};

use super::SessionError;

/// Shared, read-only inputs for every session over one pool.
#[derive(Debug, Clone)]
pub struct SessionResources {
    pool: Pool,
    clusters: ClusterIndex,
    seeds: Vec<(String, Label)>,
    seed_instances: Vec<LabeledInstance>,
    test_words: Vec<String>,
    is_test: Vec<bool>,
}

impl SessionResources {
    /// Binds pool, clusters, bootstrap seeds and the default test list.
    /// Fails when the clusters belong to another pool or a seed/test word has
    /// no feature vector.
    pub fn new(
        pool: Pool,
        clusters: ClusterIndex,
        seeds: Vec<(String, Label)>,
        test_words: Vec<String>,
    ) -> Result<Self, SessionError> {
        clusters.check_pool(&pool)?;
        if clusters.words().len() != pool.len()
            || clusters.words().iter().zip(pool.entries()).any(|(w, e)| *w != e.word)
        {
            return Err(SessionError::InvalidConfig(
                "cluster index words do not match pool order".into(),
            ));
        }
        let mut pool = pool.with_clusters(clusters.assignment());
        let mut is_test = vec![false; pool.len()];
        for w in &test_words {
            let i = pool
                .position(w)
                .ok_or_else(|| SessionError::UnknownTestWord(w.clone()))?;
            is_test[i] = true;
        }
        let seed_instances = seeds
            .iter()
            .map(|(w, label)| {
                let x = pool
                    .features(w)
                    .map_err(|_| SessionError::UnknownSeedWord(w.clone()))?;
                Ok(LabeledInstance::new(w.clone(), x.to_vec(), *label, LabelSource::Seed))
            })
            .collect::<Result<Vec<_>, SessionError>>()?;
        let seed_words: Vec<String> = seeds.iter().map(|(w, _)| w.clone()).collect();
        pool.mark_provenance(&seed_words, Provenance::Seed);
        pool.mark_provenance(&test_words, Provenance::Test);
        Ok(SessionResources {
            pool,
            clusters,
            seeds,
            seed_instances,
            test_words,
            is_test,
        })
    }

    pub fn pool(&self) -> &Pool {
        &self.pool
    }

    pub fn clusters(&self) -> &ClusterIndex {
        &self.clusters
    }

    pub fn seeds(&self) -> &[(String, Label)] {
        &self.seeds
    }

    pub fn seed_instances(&self) -> &[LabeledInstance] {
        &self.seed_instances
    }

    pub fn test_words(&self) -> &[String] {
        &self.test_words
    }

    pub fn is_test_index(&self, i: usize) -> bool {
        self.is_test[i]
    }

    pub fn is_test_word(&self, word: &str) -> bool {
        self.pool.position(word).is_some_and(|i| self.is_test[i])
    }
}

/// Reads a seed TSV with a `word` column and either `votes` (binarized at
/// `vote_threshold`) or `label` (0/1).
pub fn read_seed_file(path: &Path, vote_threshold: u32) -> Result<Vec<(String, Label)>, SessionError> {
    let text = std::fs::read_to_string(path).map_err(|e| SessionError::Io(e.to_string()))?;
    parse_seed_tsv(&text, vote_threshold)
}

pub fn parse_seed_tsv(text: &str, vote_threshold: u32) -> Result<Vec<(String, Label)>, SessionError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| SessionError::InvalidConfig("empty seed file".into()))?;
    let cols: Vec<&str> = header.split('\t').map(str::trim).collect();
    let word_col = cols
        .iter()
        .position(|c| *c == "word")
        .ok_or_else(|| SessionError::InvalidConfig("seed file lacks a word column".into()))?;
    let votes_col = cols.iter().position(|c| *c == "votes");
    let label_col = cols.iter().position(|c| *c == "label");
    if votes_col.is_none() && label_col.is_none() {
        return Err(SessionError::InvalidConfig(
            "seed file needs a votes or label column".into(),
        ));
    }
    let mut seeds = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| SessionError::InvalidConfig(format!("seed file line {}: {reason}", i + 1));
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != cols.len() {
            return Err(bad(format!("expected {} fields", cols.len())));
        }
        let word = fields[word_col].trim().to_lowercase();
        let label = match (label_col, votes_col) {
            (Some(c), _) => fields[c].parse::<Label>().map_err(bad)?,
            (None, Some(c)) => {
                let votes: i64 = fields[c].trim().parse().map_err(|_| bad(format!("bad votes {:?}", fields[c])))?;
                binarize_seed_label(votes, vote_threshold).map_err(|e| bad(e.to_string()))?
            }
            (None, None) => unreachable!(),
        };
        seeds.push((word, label));
    }
    Ok(seeds)
}

/// Reads a word list: one word per line, `#` starts a comment.
pub fn read_word_list(path: &Path) -> Result<Vec<String>, SessionError> {
    let text = std::fs::read_to_string(path).map_err(|e| SessionError::Io(e.to_string()))?;
    Ok(parse_word_list(&text))
}

pub fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect()
}

pub fn write_seed_tsv<W: Write>(mut out: W, seeds: &[(String, u32)]) -> std::io::Result<()> {
    writeln!(out, "word\tvotes")?;
    for (w, v) in seeds {
        writeln!(out, "{w}\t{v}")?;
    }
    Ok(())
}
