//! Consumers of trained personal models: C1 complexity counts, proficiency
//! prediction from those counts, and group-averaged complexity probabilities.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::Label;
use crate::lexicon::{CefrLevel, GradedLexicon, Pool};
use crate::model::{ModelError, PersonalModel};
use crate::profile::Proficiency;

#[derive(Debug, Error)]
pub enum DownstreamError {
    #[error("no graded words at level {0:?}")]
    EmptyLevel(CefrLevel),
    #[error("need at least {needed} proficiency bands, got {got}")]
    TooFewBands { needed: usize, got: usize },
    #[error("band {band} has {size} members; at least {needed} are needed to stratify")]
    BandTooSmall { band: String, size: usize, needed: usize },
    #[error("no models to aggregate")]
    NoModels,
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T> = std::result::Result<T, DownstreamError>;

/// How a graded word is assigned to a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelMembership {
    /// The level with the highest frequency (ties go to the easier level).
    #[default]
    ArgmaxLevel,
    /// Any level with a positive frequency.
    AnyPositive,
}

/// Graded words belonging to `level` that have a pool feature vector, in
/// lexicographic order.
pub fn level_vocabulary<'a>(graded: &'a GradedLexicon, pool: &Pool, level: CefrLevel, membership: LevelMembership) -> Vec<&'a str> {
    graded
        .iter()
        .filter(|(w, freqs)| {
            pool.position(w).is_some()
                && match membership {
                    LevelMembership::ArgmaxLevel => crate::lexicon::argmax_level(freqs) == level,
                    LevelMembership::AnyPositive => freqs[level.index()] > 0.0,
                }
        })
        .map(|(w, _)| w)
        .collect()
}

/// Number of words at `level` (minus `exclude`) the model predicts complex.
pub fn level_complex_count(
    model: &PersonalModel,
    graded: &GradedLexicon,
    pool: &Pool,
    level: CefrLevel,
    membership: LevelMembership,
    exclude: &HashSet<String>,
) -> Result<usize> {
    let vocab = level_vocabulary(graded, pool, level, membership);
    if vocab.is_empty() {
        return Err(DownstreamError::EmptyLevel(level));
    }
    let mut count = 0;
    for w in vocab {
        if exclude.contains(w) {
            continue;
        }
        let x = pool.features(w).expect("vocabulary words are pool words");
        if model.predict_proba(x)? > 0.5 {
            count += 1;
        }
    }
    Ok(count)
}

pub fn c1_complex_count(model: &PersonalModel, graded: &GradedLexicon, pool: &Pool, exclude: &HashSet<String>) -> Result<usize> {
    level_complex_count(model, graded, pool, CefrLevel::C1, LevelMembership::ArgmaxLevel, exclude)
}

/// Complex counts at each graded level A1..C1.
pub fn complex_counts_by_level(
    model: &PersonalModel,
    graded: &GradedLexicon,
    pool: &Pool,
    exclude: &HashSet<String>,
) -> Result<[usize; 5]> {
    let mut out = [0; 5];
    for level in CefrLevel::GRADED {
        out[level.index()] = level_complex_count(model, graded, pool, level, LevelMembership::ArgmaxLevel, exclude)?;
    }
    Ok(out)
}

/// Single-feature ordinal classifier: bands ordered from least to most
/// proficient, separated by decreasing count thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdClassifier {
    /// Bands in increasing proficiency.
    pub bands: Vec<Proficiency>,
    /// `cuts[i]` separates `bands[i]` (counts above) from `bands[i + 1]`.
    pub cuts: Vec<f64>,
}

impl ThresholdClassifier {
    /// Picks the non-increasing cuts that maximize training accuracy. Each
    /// cut sits halfway between two adjacent observed training values; ties
    /// between equally accurate cuts go to the lowest one.
    pub fn fit(samples: &[(f64, Proficiency)]) -> Self {
        let mut bands: Vec<Proficiency> = samples.iter().map(|(_, b)| *b).collect();
        bands.sort();
        bands.dedup();
        let mut values: Vec<f64> = samples.iter().map(|(v, _)| *v).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let k = bands.len();
        if k < 2 {
            return ThresholdClassifier { bands, cuts: Vec::new() };
        }
        // A sample predicts band i when cuts[i-1] >= v > cuts[i] (cuts[-1] = +inf,
        // cuts[k-1] = -inf). Cut candidates: every observed value, plus -inf.
        let mut candidates = vec![f64::NEG_INFINITY];
        candidates.extend(values.iter().copied());
        let m = candidates.len();
        let band_index = |b: Proficiency| bands.iter().position(|x| *x == b).unwrap();
        // hits[i][j]: samples of band i with v in (candidates[j-1], candidates[j]].
        let mut hits = vec![vec![0usize; m]; k];
        for &(v, b) in samples {
            let j = candidates.partition_point(|c| *c < v);
            hits[band_index(b)][j] += 1;
        }
        // prefix[i][j] = samples of band i with v <= candidates[j].
        let prefix: Vec<Vec<usize>> = hits
            .iter()
            .map(|h| {
                h.iter()
                    .scan(0, |acc, x| {
                        *acc += x;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        let total: Vec<usize> = prefix.iter().map(|p| p[m - 1]).collect();
        // Walk bands from most proficient (lowest counts) upward.
        // best[j] = best correct count for bands (i..k) given cut index j above band i.
        let last = k - 1;
        // Band `last` gets v <= candidates[j].
        let mut best: Vec<(usize, Vec<usize>)> = (0..m).map(|j| (prefix[last][j], Vec::new())).collect();
        for i in (1..last).rev() {
            // Band i gets (candidates[lo], candidates[hi]]; lo is the cut below.
            let mut next = Vec::with_capacity(m);
            for hi in 0..m {
                let mut top = (0usize, Vec::new());
                let mut found = false;
                for lo in 0..=hi {
                    let own = prefix[i][hi] - prefix[i][lo];
                    let score = own + best[lo].0;
                    if !found || score > top.0 {
                        let mut cuts = best[lo].1.clone();
                        cuts.insert(0, lo);
                        top = (score, cuts);
                        found = true;
                    }
                }
                next.push(top);
            }
            best = next;
        }
        // Band 0 gets v > candidates[j].
        let mut top: Option<(usize, Vec<usize>)> = None;
        for j in 0..m {
            let score = (total[0] - prefix[0][j]) + best[j].0;
            if top.as_ref().is_none_or(|t| score > t.0) {
                let mut cuts = best[j].1.clone();
                cuts.insert(0, j);
                top = Some((score, cuts));
            }
        }
        let cut_idx = top.map(|t| t.1).unwrap_or_default();
        ThresholdClassifier {
            cuts: cut_idx
                .iter()
                .map(|&j| match candidates.get(j + 1) {
                    Some(next) if j > 0 => (candidates[j] + next) / 2.0,
                    _ => candidates[j],
                })
                .collect(),
            bands,
        }
    }

    pub fn predict(&self, value: f64) -> Proficiency {
        for (i, cut) in self.cuts.iter().enumerate() {
            if value > *cut {
                return self.bands[i];
            }
        }
        *self.bands.last().expect("classifier has bands")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProficiencyReport {
    pub weighted_precision: f64,
    pub macro_precision: f64,
    pub accuracy: f64,
    pub folds: usize,
    /// Out-of-fold prediction for each input, in input order.
    pub predictions: Vec<Proficiency>,
}

pub const MIN_BAND_SIZE: usize = 5;

/// Stratified k-fold cross-validation of the threshold classifier on
/// (count, band) pairs. Members of each band are dealt round-robin to folds
/// in input order; precision is computed over the pooled out-of-fold
/// predictions.
pub fn predict_proficiency(samples: &[(f64, Proficiency)], folds: usize) -> Result<ProficiencyReport> {
    let mut by_band: BTreeMap<Proficiency, Vec<usize>> = BTreeMap::new();
    for (i, (_, b)) in samples.iter().enumerate() {
        by_band.entry(*b).or_default().push(i);
    }
    if by_band.len() < 3 {
        return Err(DownstreamError::TooFewBands { needed: 3, got: by_band.len() });
    }
    let needed = folds.max(MIN_BAND_SIZE);
    for (b, members) in &by_band {
        if members.len() < needed {
            return Err(DownstreamError::BandTooSmall {
                band: b.to_string(),
                size: members.len(),
                needed,
            });
        }
    }
    let mut fold_of = vec![0; samples.len()];
    for members in by_band.values() {
        for (j, &i) in members.iter().enumerate() {
            fold_of[i] = j % folds;
        }
    }
    let mut predictions = vec![Proficiency::Beginner; samples.len()];
    for f in 0..folds {
        let train: Vec<(f64, Proficiency)> = samples.iter().enumerate().filter(|(i, _)| fold_of[*i] != f).map(|(_, s)| *s).collect();
        let clf = ThresholdClassifier::fit(&train);
        for (i, (v, _)) in samples.iter().enumerate() {
            if fold_of[i] == f {
                predictions[i] = clf.predict(*v);
            }
        }
    }
    let gold: Vec<Proficiency> = samples.iter().map(|(_, b)| *b).collect();
    let (weighted_precision, macro_precision) = precision_averages(&predictions, &gold);
    let accuracy = predictions.iter().zip(&gold).filter(|(p, g)| p == g).count() as f64 / gold.len() as f64;
    Ok(ProficiencyReport {
        weighted_precision,
        macro_precision,
        accuracy,
        folds,
        predictions,
    })
}

/// Support-weighted and unweighted mean of per-class precision over the gold
/// classes. A class never predicted has precision 0.
pub fn precision_averages(pred: &[Proficiency], gold: &[Proficiency]) -> (f64, f64) {
    let mut classes: Vec<Proficiency> = gold.to_vec();
    classes.sort();
    classes.dedup();
    let n = gold.len() as f64;
    let mut weighted = 0.0;
    let mut macro_sum = 0.0;
    for c in &classes {
        let predicted = pred.iter().filter(|p| *p == c).count();
        let correct = pred.iter().zip(gold).filter(|(p, g)| *p == c && *g == c).count();
        let precision = if predicted == 0 { 0.0 } else { correct as f64 / predicted as f64 };
        let support = gold.iter().filter(|g| *g == c).count() as f64;
        weighted += precision * support / n;
        macro_sum += precision;
    }
    (weighted, macro_sum / classes.len() as f64)
}

/// Mean predicted probability across models.
pub fn group_complexity_probability(models: &[&PersonalModel], features: &[f64]) -> Result<f64> {
    if models.is_empty() {
        return Err(DownstreamError::NoModels);
    }
    let mut sum = 0.0;
    for m in models {
        sum += m.predict_proba(features)?;
    }
    Ok(sum / models.len() as f64)
}

pub fn group_decision(probability: f64) -> Label {
    Label::from_probability(probability)
}

/// Writes `word,probability,decision` rows for each word with a feature vector.
pub fn write_scores<W: Write>(out: W, rows: &[(String, f64)]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["word", "probability", "decision"])?;
    for (word, p) in rows {
        w.write_record([word.as_str(), &format!("{p}"), &group_decision(*p).bit().to_string()])?;
    }
    w.flush()
}
