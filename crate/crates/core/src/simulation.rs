//! Simulated annotators and the strategy and proficiency-band studies.
//!
//! A threshold oracle knows a word iff its knowledge score (a weighted sum of
//! normalized pool features, optionally plus a graded-level term) reaches the
//! oracle's cutoff; answers are flipped with probability `noise_rate`.
//! Evaluation always uses the noise-free rule as gold.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::downstream::{complex_counts_by_level, DownstreamError};
use crate::label::Label;
use crate::lexicon::{GradedLexicon, Pool};
use crate::metrics::{f_scores, kappa_from_confusion, Confusion, FScores, Kappa};
use crate::model::PersonalModel;
use crate::profile::{AnnotatorProfile, Proficiency};
use crate::session::{Clock, QueryStrategy, Session, SessionConfig, SessionError, SessionEvent, SessionId, SessionResources};

const ORACLE_STREAM: u64 = 7;

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("noise rate {0} must be in [0, 0.5)")]
    NoiseRate(f64),
    #[error("oracle cannot score {0:?}")]
    Unscoreable(String),
    #[error("replay oracle has no answer for {0:?} and no default")]
    ReplayMiss(String),
    #[error("unknown feature {0:?} in oracle weights")]
    UnknownFeature(String),
    #[error("budget {budget} exceeds the {available} queryable pool words")]
    BudgetTooLarge { budget: usize, available: usize },
    #[error("band {0:?} has no models")]
    EmptyBand(String),
    #[error("invalid study config: {0}")]
    Config(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Downstream(#[from] DownstreamError),
}

pub type Result<T> = std::result::Result<T, SimulationError>;

fn default_weights() -> BTreeMap<String, f64> {
    [("log_frequency".to_string(), 1.0)].into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOracle {
    /// Weights over normalized pool features, by feature name.
    #[serde(default = "default_weights")]
    pub feature_weights: BTreeMap<String, f64>,
    /// Weight on the graded-level ease term, from +1 at A1 to -1 at C1.
    #[serde(default)]
    pub level_weight: f64,
    pub cutoff: f64,
    #[serde(default)]
    pub noise_rate: f64,
}

impl ThresholdOracle {
    pub fn frequency_cut(cutoff: f64, noise_rate: f64) -> Self {
        ThresholdOracle {
            feature_weights: default_weights(),
            level_weight: 0.0,
            cutoff,
            noise_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleKind {
    Threshold(ThresholdOracle),
    Replay {
        /// word -> knows_word
        answers: BTreeMap<String, bool>,
        #[serde(default)]
        default: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpec {
    #[serde(flatten)]
    pub kind: OracleKind,
    #[serde(default)]
    pub proficiency: Option<Proficiency>,
}

impl OracleSpec {
    pub fn threshold(oracle: ThresholdOracle) -> Self {
        OracleSpec {
            kind: OracleKind::Threshold(oracle),
            proficiency: None,
        }
    }

    /// Replays a recorded human test set (complex means the word was unknown).
    pub fn replay(items: &[(String, Label)], default: Option<bool>) -> Self {
        OracleSpec {
            kind: OracleKind::Replay {
                answers: items.iter().map(|(w, l)| (w.clone(), !l.is_complex())).collect(),
                default,
            },
            proficiency: None,
        }
    }
}

/// A ready-to-answer oracle bound to one pool.
#[derive(Debug, Clone)]
pub struct Oracle {
    spec: OracleSpec,
    scores: Option<Arc<Vec<f64>>>,
    pool_index: Arc<std::collections::HashMap<String, usize>>,
    rng: ChaCha8Rng,
}

fn level_ease(graded: Option<&GradedLexicon>, word: &str) -> f64 {
    graded
        .and_then(|g| g.argmax_level(word))
        .map(|l| (2.0 - l.index() as f64) / 2.0)
        .unwrap_or(0.0)
}

/// Knowledge scores of every pool word under a threshold oracle's weights.
pub fn knowledge_scores(oracle: &ThresholdOracle, pool: &Pool, graded: Option<&GradedLexicon>) -> Result<Vec<f64>> {
    let mut idx = Vec::new();
    for (name, w) in &oracle.feature_weights {
        let j = pool.feature_index(name).ok_or_else(|| SimulationError::UnknownFeature(name.clone()))?;
        idx.push((j, *w));
    }
    Ok(pool
        .entries()
        .iter()
        .map(|e| {
            let s: f64 = idx.iter().map(|&(j, w)| w * e.features[j]).sum();
            s + oracle.level_weight * level_ease(graded, &e.word)
        })
        .collect())
}

impl Oracle {
    pub fn new(spec: OracleSpec, pool: &Pool, graded: Option<&GradedLexicon>, seed: u64) -> Result<Self> {
        let scores = match &spec.kind {
            OracleKind::Threshold(t) => {
                if !(0.0..0.5).contains(&t.noise_rate) {
                    return Err(SimulationError::NoiseRate(t.noise_rate));
                }
                Some(Arc::new(knowledge_scores(t, pool, graded)?))
            }
            OracleKind::Replay { .. } => None,
        };
        Ok(Self::with_scores(spec, scores, pool, seed))
    }

    fn with_scores(spec: OracleSpec, scores: Option<Arc<Vec<f64>>>, pool: &Pool, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ORACLE_STREAM);
        Oracle {
            spec,
            scores,
            pool_index: Arc::new(pool.entries().iter().enumerate().map(|(i, e)| (e.word.clone(), i)).collect()),
            rng,
        }
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn knowledge_score(&self, word: &str) -> Option<f64> {
        let scores = self.scores.as_ref()?;
        self.pool_index.get(word).map(|&i| scores[i])
    }

    /// The noise-free answer.
    pub fn true_answer(&self, word: &str) -> Result<bool> {
        match &self.spec.kind {
            OracleKind::Threshold(t) => {
                let s = self
                    .knowledge_score(word)
                    .ok_or_else(|| SimulationError::Unscoreable(word.to_string()))?;
                Ok(s >= t.cutoff)
            }
            OracleKind::Replay { answers, default } => answers
                .get(word)
                .copied()
                .or(*default)
                .ok_or_else(|| SimulationError::ReplayMiss(word.to_string())),
        }
    }

    pub fn gold(&self, word: &str) -> Result<Label> {
        Ok(Label::from_knows_word(self.true_answer(word)?))
    }

    /// The (possibly noisy) answer an annotator gives.
    pub fn answer(&mut self, word: &str) -> Result<bool> {
        let truth = self.true_answer(word)?;
        let noise = match &self.spec.kind {
            OracleKind::Threshold(t) => t.noise_rate,
            OracleKind::Replay { .. } => 0.0,
        };
        if noise > 0.0 && self.rng.random::<f64>() < noise {
            Ok(!truth)
        } else {
            Ok(truth)
        }
    }
}

pub fn oracle_answer(oracle: &mut Oracle, word: &str) -> Result<bool> {
    oracle.answer(word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ActiveLearning,
    ClusterRandom,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::ActiveLearning, Strategy::ClusterRandom, Strategy::Random];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::ActiveLearning => "active_learning",
            Strategy::ClusterRandom => "cluster_random",
            Strategy::Random => "random",
        }
    }

    /// Session settings for this strategy on top of `base`.
    pub fn session_config(self, base: &SessionConfig) -> SessionConfig {
        let mut c = *base;
        match self {
            Strategy::ActiveLearning => {
                c.query_strategy = QueryStrategy::Entropy;
                c.propagation.enabled = true;
            }
            Strategy::ClusterRandom => {
                c.query_strategy = QueryStrategy::Random;
                c.propagation.enabled = true;
            }
            Strategy::Random => {
                c.query_strategy = QueryStrategy::Random;
                c.propagation.enabled = false;
                c.retain_seed = false;
            }
        }
        c
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.as_str() == s.trim())
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub seed: u64,
    pub oracle: OracleSpec,
    pub budget: usize,
    pub model: PersonalModel,
    pub seen_words: Vec<String>,
    pub test_items: Vec<(String, Label)>,
    pub confusion: Confusion,
    pub f: FScores,
    pub kappa: Kappa,
    pub events: Vec<SessionEvent>,
}

/// Drives a full session against `oracle` and scores the final model on the
/// session's test items against the oracle's noise-free labels.
pub fn run_session(resources: Arc<SessionResources>, config: SessionConfig, oracle: &mut Oracle, id: SessionId) -> Result<Session> {
    let available = (0..resources.pool().len()).filter(|&i| !resources.is_test_index(i)).count();
    if config.budget > available {
        return Err(SimulationError::BudgetTooLarge {
            budget: config.budget,
            available,
        });
    }
    let profile = AnnotatorProfile::new(oracle.spec().proficiency.unwrap_or(Proficiency::Intermediate));
    let mut session = Session::create(resources, config, profile, id, Clock::Logical)?;
    while let Some(word) = session.current_query().map(str::to_string) {
        let knows = oracle.answer(&word)?;
        session.submit_annotation(&word, knows)?;
    }
    Ok(session)
}

pub fn evaluate_on_test(session: &Session, oracle: &Oracle) -> Result<(Vec<(String, Label)>, Confusion)> {
    let pool = session.resources().pool();
    let mut gold = Vec::new();
    let mut pred = Vec::new();
    let mut items = Vec::new();
    for w in session.test_items() {
        let g = oracle.gold(w)?;
        let x = pool.features(w).map_err(|_| SimulationError::Unscoreable(w.clone()))?;
        pred.push(session.model().predict(x).map_err(SessionError::from)?);
        gold.push(g);
        items.push((w.clone(), g));
    }
    let confusion = if gold.is_empty() {
        Confusion::default()
    } else {
        Confusion::from_labels(&pred, &gold).expect("equal lengths")
    };
    Ok((items, confusion))
}

pub fn run_strategy(
    resources: Arc<SessionResources>,
    graded: Option<&GradedLexicon>,
    oracle: &OracleSpec,
    strategy: Strategy,
    base: &SessionConfig,
    seed: u64,
) -> Result<StrategyRun> {
    let mut o = Oracle::new(oracle.clone(), resources.pool(), graded, seed)?;
    run_strategy_with(resources, &mut o, strategy, base, seed)
}

fn run_strategy_with(resources: Arc<SessionResources>, oracle: &mut Oracle, strategy: Strategy, base: &SessionConfig, seed: u64) -> Result<StrategyRun> {
    let mut config = strategy.session_config(base);
    config.rng_seed = seed;
    let id = SessionId(format!("{}-{seed}", strategy.as_str()));
    let session = run_session(resources, config, oracle, id)?;
    let (test_items, confusion) = evaluate_on_test(&session, oracle)?;
    Ok(StrategyRun {
        strategy,
        seed,
        oracle: oracle.spec().clone(),
        budget: config.budget,
        model: session.model().clone(),
        seen_words: session.seen_words(),
        test_items,
        f: f_scores(&confusion),
        kappa: kappa_from_confusion(&confusion),
        confusion,
        events: session.events().to_vec(),
    })
}

/// Per-run seed for oracle `i` of a study.
pub fn run_seed(study_seed: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(study_seed);
    rng.set_word_pos(2 * i as u128);
    rng.random()
}

/// A family of threshold oracles with cutoffs drawn uniformly from a range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleFamily {
    pub cutoff_min: f64,
    pub cutoff_max: f64,
    pub noise_rate: f64,
    pub feature_weights: BTreeMap<String, f64>,
    pub level_weight: f64,
}

impl Default for OracleFamily {
    fn default() -> Self {
        OracleFamily {
            cutoff_min: -1.0,
            cutoff_max: 1.0,
            noise_rate: 0.1,
            feature_weights: default_weights(),
            level_weight: 0.0,
        }
    }
}

impl OracleFamily {
    /// The `i`th oracle of the family; depends only on `(seed, i)`.
    pub fn draw(&self, seed: u64) -> ThresholdOracle {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: f64 = rng.random();
        ThresholdOracle {
            feature_weights: self.feature_weights.clone(),
            level_weight: self.level_weight,
            cutoff: self.cutoff_min + u * (self.cutoff_max - self.cutoff_min),
            noise_rate: self.noise_rate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: Strategy,
    pub runs: usize,
    pub mean_f: f64,
    pub mean_f_complex: f64,
    pub mean_kappa: f64,
}

#[derive(Debug, Clone)]
pub struct StrategyStudy {
    pub runs: Vec<StrategyRun>,
    pub summaries: Vec<StrategySummary>,
}

/// Runs every strategy against the same `oracles` oracles. Oracle `i` and
/// the session seed for run `i` are shared across strategies.
pub fn strategy_study(
    resources: Arc<SessionResources>,
    graded: Option<&GradedLexicon>,
    family: &OracleFamily,
    strategies: &[Strategy],
    oracles: usize,
    base: &SessionConfig,
    seed: u64,
) -> Result<StrategyStudy> {
    let jobs: Vec<(usize, Strategy)> = (0..oracles).flat_map(|i| strategies.iter().map(move |s| (i, *s))).collect();
    let spec0 = family.draw(0);
    let scores = Arc::new(knowledge_scores(&spec0, resources.pool(), graded)?);
    if !(0.0..0.5).contains(&family.noise_rate) {
        return Err(SimulationError::NoiseRate(family.noise_rate));
    }
    let runs: Vec<StrategyRun> = jobs
        .par_iter()
        .map(|&(i, strategy)| {
            let s = run_seed(seed, i);
            let spec = OracleSpec::threshold(family.draw(s));
            let mut oracle = Oracle::with_scores(spec, Some(scores.clone()), resources.pool(), s);
            run_strategy_with(resources.clone(), &mut oracle, strategy, base, s)
        })
        .collect::<Result<_>>()?;
    let summaries = strategies
        .iter()
        .map(|&strategy| summarize(strategy, runs.iter().filter(|r| r.strategy == strategy)))
        .collect();
    Ok(StrategyStudy { runs, summaries })
}

fn summarize<'a>(strategy: Strategy, runs: impl Iterator<Item = &'a StrategyRun>) -> StrategySummary {
    let (mut n, mut f, mut fc, mut k) = (0usize, 0.0, 0.0, 0.0);
    for r in runs {
        n += 1;
        f += r.f.macro_f;
        fc += r.f.complex;
        k += r.kappa.value;
    }
    let d = n.max(1) as f64;
    StrategySummary {
        strategy,
        runs: n,
        mean_f: f / d,
        mean_f_complex: fc / d,
        mean_kappa: k / d,
    }
}

impl StrategyStudy {
    pub fn summary(&self, strategy: Strategy) -> Option<&StrategySummary> {
        self.summaries.iter().find(|s| s.strategy == strategy)
    }

    /// Table 3 layout: one row per strategy.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["strategy", "runs", "f_score", "f_complex", "kappa"])?;
        for s in &self.summaries {
            w.write_record([
                s.strategy.as_str().to_string(),
                s.runs.to_string(),
                format!("{:.4}", s.mean_f),
                format!("{:.4}", s.mean_f_complex),
                format!("{:.4}", s.mean_kappa),
            ])?;
        }
        w.flush()
    }

    pub fn write_runs_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["strategy", "seed", "cutoff", "f_score", "kappa", "tp", "fp", "fn", "tn"])?;
        for r in &self.runs {
            let cutoff = match &r.oracle.kind {
                OracleKind::Threshold(t) => t.cutoff.to_string(),
                OracleKind::Replay { .. } => String::new(),
            };
            w.write_record([
                r.strategy.as_str().to_string(),
                r.seed.to_string(),
                cutoff,
                r.f.macro_f.to_string(),
                r.kappa.value.to_string(),
                r.confusion.tp.to_string(),
                r.confusion.fp.to_string(),
                r.confusion.fn_.to_string(),
                r.confusion.tn.to_string(),
            ])?;
        }
        w.flush()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub proficiency: Proficiency,
    pub cutoff_min: f64,
    pub cutoff_max: f64,
}

/// Default cutoff ranges: less proficient annotators know fewer words.
pub fn default_bands() -> Vec<BandSpec> {
    vec![
        BandSpec {
            proficiency: Proficiency::Intermediate,
            cutoff_min: 0.3,
            cutoff_max: 0.9,
        },
        BandSpec {
            proficiency: Proficiency::Advanced,
            cutoff_min: -0.3,
            cutoff_max: 0.3,
        },
        BandSpec {
            proficiency: Proficiency::NearNative,
            cutoff_min: -0.9,
            cutoff_max: -0.3,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandModel {
    pub proficiency: Proficiency,
    pub seed: u64,
    pub cutoff: f64,
    pub model: PersonalModel,
    pub seen_words: Vec<String>,
    /// Predicted-complex counts at A1..C1, seen words excluded.
    pub counts: [usize; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandStudy {
    pub models: Vec<BandModel>,
    pub bands: Vec<Proficiency>,
    /// Mean counts per band at A1..C1, in `bands` order.
    pub mean_counts: Vec<[f64; 5]>,
}

impl BandStudy {
    pub fn mean_for(&self, band: Proficiency) -> Option<&[f64; 5]> {
        self.bands.iter().position(|b| *b == band).map(|i| &self.mean_counts[i])
    }

    /// (C1 count, band) pairs for proficiency prediction.
    pub fn c1_samples(&self) -> Vec<(f64, Proficiency)> {
        self.models.iter().map(|m| (m.counts[4] as f64, m.proficiency)).collect()
    }

    /// Table 5 layout: rows are bands, columns CEFR levels.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["band", "A1", "A2", "B1", "B2", "C1"])?;
        for (b, counts) in self.bands.iter().zip(&self.mean_counts) {
            let mut row = vec![b.title().to_string()];
            row.extend(counts.iter().map(|c| format!("{c:.1}")));
            w.write_record(&row)?;
        }
        w.flush()
    }
}

/// Trains `models_per_band` active-learning models per band and counts the
/// graded words each predicts complex, excluding words seen in training.
pub fn proficiency_band_study(
    resources: Arc<SessionResources>,
    graded: &GradedLexicon,
    bands: &[BandSpec],
    models_per_band: usize,
    noise_rate: f64,
    base: &SessionConfig,
    seed: u64,
) -> Result<BandStudy> {
    if models_per_band == 0 {
        let name = bands.first().map(|b| b.proficiency.to_string()).unwrap_or_default();
        return Err(SimulationError::EmptyBand(name));
    }
    if !(0.0..0.5).contains(&noise_rate) {
        return Err(SimulationError::NoiseRate(noise_rate));
    }
    let proto = ThresholdOracle::frequency_cut(0.0, noise_rate);
    let scores = Arc::new(knowledge_scores(&proto, resources.pool(), Some(graded))?);
    let jobs: Vec<(usize, usize)> = (0..bands.len()).flat_map(|b| (0..models_per_band).map(move |i| (b, i))).collect();
    let models: Vec<BandModel> = jobs
        .par_iter()
        .map(|&(b, i)| {
            let band = &bands[b];
            let s = run_seed(seed ^ (b as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15), i);
            let u: f64 = ChaCha8Rng::seed_from_u64(s).random();
            let cutoff = band.cutoff_min + u * (band.cutoff_max - band.cutoff_min);
            let spec = OracleSpec {
                kind: OracleKind::Threshold(ThresholdOracle::frequency_cut(cutoff, noise_rate)),
                proficiency: Some(band.proficiency),
            };
            let mut oracle = Oracle::with_scores(spec, Some(scores.clone()), resources.pool(), s);
            let mut config = Strategy::ActiveLearning.session_config(base);
            config.rng_seed = s;
            let session = run_session(resources.clone(), config, &mut oracle, SessionId(format!("{}-{i}", band.proficiency)))?;
            let seen: HashSet<String> = session.seen_words().into_iter().collect();
            let counts = complex_counts_by_level(session.model(), graded, resources.pool(), &seen)?;
            Ok(BandModel {
                proficiency: band.proficiency,
                seed: s,
                cutoff,
                model: session.model().clone(),
                seen_words: session.seen_words(),
                counts,
            })
        })
        .collect::<Result<_>>()?;
    let band_names: Vec<Proficiency> = bands.iter().map(|b| b.proficiency).collect();
    let mean_counts = band_names
        .iter()
        .map(|b| {
            let mut sum = [0.0; 5];
            let mut n = 0;
            for m in models.iter().filter(|m| m.proficiency == *b) {
                for (s, c) in sum.iter_mut().zip(m.counts) {
                    *s += c as f64;
                }
                n += 1;
            }
            sum.map(|s| s / n as f64)
        })
        .collect();
    Ok(BandStudy {
        models,
        bands: band_names,
        mean_counts,
    })
}

/// Declarative study description, read from TOML. Relative paths resolve
/// against the config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub data: DataPaths,
    #[serde(default)]
    pub session: SessionConfig,
    #[serde(default)]
    pub strategies: Option<StrategyStudyConfig>,
    #[serde(default)]
    pub bands: Option<BandStudyConfig>,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPaths {
    pub pool: PathBuf,
    pub seeds: PathBuf,
    pub test_words: PathBuf,
    #[serde(default)]
    pub graded: Option<PathBuf>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_vote_threshold")]
    pub vote_threshold: u32,
}

fn default_k() -> usize {
    crate::clustering::DEFAULT_K
}

fn default_vote_threshold() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyStudyConfig {
    #[serde(default = "default_oracles")]
    pub oracles: usize,
    #[serde(default = "all_strategies")]
    pub strategies: Vec<Strategy>,
    #[serde(default)]
    pub oracle: OracleFamily,
}

fn default_oracles() -> usize {
    100
}

fn all_strategies() -> Vec<Strategy> {
    Strategy::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandStudyConfig {
    #[serde(default = "default_oracles")]
    pub models_per_band: usize,
    #[serde(default = "default_band_noise")]
    pub noise_rate: f64,
    #[serde(default = "default_bands")]
    pub bands: Vec<BandSpec>,
}

fn default_band_noise() -> f64 {
    0.05
}

impl StudyConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SimulationError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SimulationError::Config(format!("{}: {e}", path.display())))?;
        let mut c = Self::parse(&text)?;
        if let Some(dir) = path.parent() {
            c.data.resolve(dir);
        }
        Ok(c)
    }
}

impl DataPaths {
    pub fn resolve(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        fix(&mut self.pool);
        fix(&mut self.seeds);
        fix(&mut self.test_words);
        if let Some(g) = self.graded.as_mut() {
            fix(g);
        }
    }
}
