//! The per-annotator active learning session.
//!
//! Every training answer runs four stages: record the annotation, propagate
//! its label to the nearest pool words, refit the personal model, and re-rank
//! the remaining pool by predictive entropy to choose the next query. After
//! `budget` training items the session silently switches to the held-out test
//! words, whose answers never touch the model.
//!
//! All state changes go through [`SessionEvent`]s. A live call computes an
//! event, appends it to the log and applies it; [`Session::replay`] recomputes
//! each logged event, checks it matches, and applies it, so any log prefix
//! reconstructs the exact state at that point.

mod events;
mod resources;
mod selection;

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{nearest_filtered, ClusterError, Scope};
use crate::label::Label;
use crate::model::{self, FitConfig, LabelSource, LabeledInstance, ModelError, ModelRecord, PersonalModel, TrainedOn};
use crate::profile::AnnotatorProfile;

pub use events::{read_events, write_events, EventKind, SessionEvent};
pub use resources::{parse_seed_tsv, parse_word_list, read_seed_file, read_word_list, write_seed_tsv, SessionResources};
pub use selection::{binary_entropy, select_max_entropy, select_min_margin};

pub const DEFAULT_BUDGET: usize = 23;
pub const DEFAULT_TEST_SIZE: usize = 22;
pub const DEFAULT_NEIGHBORS: usize = 150;

const TEST_ORDER_STREAM: u64 = 1;
const QUERY_STREAM: u64 = 2;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("test word {0:?} has no feature vector")]
    UnknownTestWord(String),
    #[error("seed word {0:?} has no feature vector")]
    UnknownSeedWord(String),
    #[error("invalid session config: {0}")]
    InvalidConfig(String),
    #[error("expected an answer for {expected:?}, got {got:?}")]
    WrongWord { expected: Option<String>, got: String },
    #[error("session is completed")]
    Completed,
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("event {found} out of sequence, expected {expected}")]
    SequenceGap { expected: u64, found: u64 },
    #[error("log does not start with session_created")]
    MissingCreation,
    #[error("log was recorded against pool {found}, resources hold {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("event {sequence_no} diverges from recomputation: {detail}")]
    Divergence { sequence_no: u64, detail: String },
    #[error("event {sequence_no}: {source}")]
    Session {
        sequence_no: u64,
        #[source]
        source: SessionError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryStrategy {
    /// Maximum predictive entropy over the queryable pool.
    #[default]
    Entropy,
    /// Uniformly random queryable word.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PropagationConfig {
    pub enabled: bool,
    pub neighbors: usize,
    pub scope: Scope,
    /// Instance weight of propagated labels in the fit.
    pub weight: f64,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            enabled: true,
            neighbors: DEFAULT_NEIGHBORS,
            scope: Scope::SameCluster,
            weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub budget: usize,
    /// Number of test words to use from the resource list; `None` uses all.
    pub test_size: Option<usize>,
    pub propagation: PropagationConfig,
    pub query_strategy: QueryStrategy,
    pub fit: FitConfig,
    /// Keep the bootstrap seed instances in the training set after the first answer.
    pub retain_seed: bool,
    pub rng_seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            budget: DEFAULT_BUDGET,
            test_size: None,
            propagation: PropagationConfig::default(),
            query_strategy: QueryStrategy::Entropy,
            fit: FitConfig::default(),
            retain_seed: true,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum Phase {
    Created,
    Training { item: usize, of: usize },
    Testing { item: usize, of: usize },
    Completed,
}

impl Phase {
    pub fn is_training(self) -> bool {
        matches!(self, Phase::Training { .. })
    }

    pub fn is_testing(self) -> bool {
        matches!(self, Phase::Testing { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Clock {
    /// Wall-clock milliseconds.
    #[default]
    System,
    /// Timestamps equal sequence numbers; fully reproducible logs.
    Logical,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SessionId(pub String);

impl SessionId {
    /// An unguessable 128-bit token.
    pub fn random() -> Self {
        let bits: u128 = rand::rng().random();
        SessionId(format!("{bits:032x}"))
    }
}

impl std::fmt::Display for SessionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// What the annotator sees next. Carries no phase information.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub word: String,
    pub item_number: usize,
    pub total_items: usize,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: SessionId,
    resources: Arc<SessionResources>,
    config: SessionConfig,
    profile: Option<AnnotatorProfile>,
    phase: Phase,
    test_items: Vec<String>,
    direct: Vec<Option<Label>>,
    propagated: Vec<Option<Label>>,
    training_answers: Vec<(String, bool)>,
    test_answers: Vec<(String, bool)>,
    queried: HashSet<String>,
    current_query: Option<String>,
    model: PersonalModel,
    query_rng: ChaCha8Rng,
    log: Vec<SessionEvent>,
    clock: Clock,
}

fn shuffled_test_items(resources: &SessionResources, config: &SessionConfig) -> Result<Vec<String>, SessionError> {
    let all = resources.test_words();
    let size = config.test_size.unwrap_or(all.len());
    if size > all.len() {
        return Err(SessionError::InvalidConfig(format!(
            "test_size {size} exceeds the {} available test words",
            all.len()
        )));
    }
    let mut items = all[..size].to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(TEST_ORDER_STREAM);
    items.shuffle(&mut rng);
    Ok(items)
}

fn query_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(QUERY_STREAM);
    rng
}

impl Session {
    fn blank(resources: Arc<SessionResources>, id: SessionId, config: SessionConfig, test_items: Vec<String>, clock: Clock) -> Self {
        let n = resources.pool().len();
        let model = PersonalModel::untrained(resources.pool().stats().clone(), config.fit.regularization_strength);
        Session {
            id,
            config,
            profile: None,
            phase: Phase::Created,
            test_items,
            direct: vec![None; n],
            propagated: vec![None; n],
            training_answers: Vec::new(),
            test_answers: Vec::new(),
            queried: HashSet::new(),
            current_query: None,
            model,
            query_rng: query_rng(config.rng_seed),
            log: Vec::new(),
            clock,
            resources,
        }
    }

    /// Starts a session: bootstrap fit on the seed set, then the first query.
    pub fn create(
        resources: Arc<SessionResources>,
        config: SessionConfig,
        profile: AnnotatorProfile,
        id: SessionId,
        clock: Clock,
    ) -> Result<Self, SessionError> {
        if config.propagation.enabled && config.propagation.neighbors == 0 {
            return Err(SessionError::InvalidConfig("propagation needs at least one neighbor".into()));
        }
        if !(config.propagation.weight > 0.0) {
            return Err(SessionError::InvalidConfig("propagation weight must be positive".into()));
        }
        let test_items = shuffled_test_items(&resources, &config)?;
        let mut s = Session::blank(resources, id.clone(), config, test_items.clone(), clock);
        s.record(EventKind::SessionCreated {
            session_id: id.0,
            pool_hash: s.resources.pool().content_hash().to_string(),
            config,
            test_items,
        });
        s.record(EventKind::DemographicsRecorded { profile });
        let refit = s.compute_refit()?;
        s.record(refit);
        s.progress()?;
        Ok(s)
    }

    pub fn id(&self) -> &SessionId {
        &self.id
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn profile(&self) -> Option<&AnnotatorProfile> {
        self.profile.as_ref()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn resources(&self) -> &Arc<SessionResources> {
        &self.resources
    }

    pub fn model(&self) -> &PersonalModel {
        &self.model
    }

    pub fn current_query(&self) -> Option<&str> {
        self.current_query.as_deref()
    }

    pub fn test_items(&self) -> &[String] {
        &self.test_items
    }

    pub fn training_answers(&self) -> &[(String, bool)] {
        &self.training_answers
    }

    pub fn test_answers(&self) -> &[(String, bool)] {
        &self.test_answers
    }

    pub fn events(&self) -> &[SessionEvent] {
        &self.log
    }

    pub fn events_since(&self, n: usize) -> &[SessionEvent] {
        &self.log[n.min(self.log.len())..]
    }

    pub fn is_completed(&self) -> bool {
        self.phase == Phase::Completed
    }

    pub fn total_items(&self) -> usize {
        self.config.budget + self.test_items.len()
    }

    /// True once the model can no longer change.
    pub fn training_finished(&self) -> bool {
        matches!(self.phase, Phase::Testing { .. } | Phase::Completed)
    }

    pub fn current_item(&self) -> Option<Item> {
        let word = self.current_query.clone()?;
        let item_number = match self.phase {
            Phase::Training { item, .. } => item,
            Phase::Testing { item, .. } => self.config.budget + item,
            _ => return None,
        };
        Some(Item {
            word,
            item_number,
            total_items: self.total_items(),
        })
    }

    /// Current labelled set ℒ: retained seeds, then pool words in pool order,
    /// each contributing its direct label if any, else its newest propagated one.
    pub fn labelled_set(&self) -> Vec<LabeledInstance> {
        let pool = self.resources.pool();
        let mut data = Vec::new();
        let has_direct = self.direct.iter().any(Option::is_some);
        if self.config.retain_seed || !has_direct {
            data.extend_from_slice(self.resources.seed_instances());
        }
        for (i, entry) in pool.entries().iter().enumerate() {
            let (label, source, weight) = match (self.direct[i], self.propagated[i]) {
                (Some(l), _) => (l, LabelSource::Direct, 1.0),
                (None, Some(l)) => (l, LabelSource::Propagated, self.config.propagation.weight),
                (None, None) => continue,
            };
            data.push(LabeledInstance {
                word: entry.word.clone(),
                features: entry.features.clone(),
                label,
                source,
                weight,
            });
        }
        data
    }

    pub fn direct_label(&self, word: &str) -> Option<Label> {
        self.resources.pool().position(word).and_then(|i| self.direct[i])
    }

    pub fn propagated_label(&self, word: &str) -> Option<Label> {
        self.resources.pool().position(word).and_then(|i| self.propagated[i])
    }

    /// Words the model was trained on by annotation: retained seeds plus
    /// directly annotated training words.
    pub fn seen_words(&self) -> Vec<String> {
        let mut words: Vec<String> = if self.config.retain_seed {
            self.resources.seeds().iter().map(|(w, _)| w.clone()).collect()
        } else {
            Vec::new()
        };
        words.extend(self.training_answers.iter().map(|(w, _)| w.clone()));
        words
    }

    pub fn export(&self) -> ModelRecord {
        let mut record = ModelRecord::new(self.model.clone());
        record.session_id = Some(self.id.0.clone());
        record.seen_words = self.seen_words();
        record
    }

    /// Accepts the answer for the current query and runs the rest of the step.
    pub fn submit_annotation(&mut self, word: &str, knows_word: bool) -> Result<Option<Item>, SessionError> {
        if self.phase == Phase::Completed {
            return Err(SessionError::Completed);
        }
        if self.current_query.as_deref() != Some(word) {
            return Err(SessionError::WrongWord {
                expected: self.current_query.clone(),
                got: word.to_string(),
            });
        }
        let training = self.phase.is_training();
        let label = Label::from_knows_word(knows_word);
        self.record(EventKind::AnnotationReceived {
            word: word.to_string(),
            knows_word,
            label,
        });
        if training {
            if self.config.propagation.enabled {
                let event = self.compute_propagation(word, label)?;
                self.record(event);
            }
            let refit = self.compute_refit()?;
            self.record(refit);
        }
        self.progress()?;
        Ok(self.current_item())
    }

    /// Propagates `label` from `anchor` to its nearest pool words; returns how
    /// many received it.
    pub fn propagate(&mut self, anchor: &str, label: Label) -> Result<usize, SessionError> {
        let event = self.compute_propagation(anchor, label)?;
        let n = match &event {
            EventKind::LabelsPropagated { targets, .. } => targets.len(),
            _ => 0,
        };
        self.record(event);
        Ok(n)
    }

    /// Highest-entropy queryable word under the current model.
    pub fn rank_and_select(&self) -> Option<String> {
        let pool = self.resources.pool();
        let candidates: Vec<(&str, f64)> = self
            .queryable()
            .map(|i| {
                let e = &pool.entries()[i];
                let p = self.model.predict_proba(&e.features).expect("pool dimension");
                (e.word.as_str(), p)
            })
            .collect();
        select_max_entropy(candidates).map(str::to_string)
    }

    fn queryable(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.resources.pool().len()).filter(move |&i| self.direct[i].is_none() && !self.resources.is_test_index(i))
    }

    fn now(&self) -> u64 {
        match self.clock {
            Clock::Logical => self.log.len() as u64,
            Clock::System => SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
        }
    }

    fn record(&mut self, kind: EventKind) {
        let event = SessionEvent {
            sequence_no: self.log.len() as u64,
            timestamp: self.now(),
            kind,
        };
        self.apply(&event.kind);
        self.log.push(event);
    }

    fn compute_propagation(&self, anchor: &str, label: Label) -> Result<EventKind, SessionError> {
        let pool = self.resources.pool();
        let i = pool
            .position(anchor)
            .ok_or_else(|| SessionError::InvalidConfig(format!("anchor {anchor:?} is not a pool word")))?;
        let resources = &self.resources;
        let neighbors = nearest_filtered(
            &pool.entries()[i],
            pool.entries(),
            self.config.propagation.neighbors,
            self.config.propagation.scope,
            |e| !resources.is_test_word(&e.word),
        );
        let targets = match neighbors {
            Ok(n) => n.into_iter().map(|n| n.word).collect(),
            Err(ClusterError::EmptyScope(_)) => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(EventKind::LabelsPropagated {
            anchor: anchor.to_string(),
            label,
            targets,
        })
    }

    fn compute_refit(&self) -> Result<EventKind, SessionError> {
        let data = self.labelled_set();
        let fitted = model::fit(&data, self.resources.pool().stats(), &self.config.fit)?;
        Ok(EventKind::ModelRefit {
            version: self.model.version + 1,
            weights: fitted.weights,
            bias: fitted.bias,
            trained_on: fitted.trained_on,
            degenerate: fitted.degenerate,
        })
    }

    fn compute_next_training_query(&mut self) -> Option<String> {
        match self.config.query_strategy {
            QueryStrategy::Entropy => self.rank_and_select(),
            QueryStrategy::Random => {
                let candidates: Vec<usize> = self.queryable().collect();
                if candidates.is_empty() {
                    return None;
                }
                let pick = candidates[self.query_rng.random_range(0..candidates.len())];
                Some(self.resources.pool().entries()[pick].word.clone())
            }
        }
    }

    /// The event that moves the session forward from a waiting-free state.
    fn compute_progress(&mut self) -> Option<EventKind> {
        if self.current_query.is_some() {
            return None;
        }
        let budget = self.config.budget;
        let tests = self.test_items.len();
        let test_phase = |s: &Session| {
            if tests > 0 {
                EventKind::PhaseAdvanced {
                    from: s.phase,
                    to: Phase::Testing { item: 0, of: tests },
                }
            } else {
                EventKind::PhaseAdvanced {
                    from: s.phase,
                    to: Phase::Completed,
                }
            }
        };
        match self.phase {
            Phase::Created => Some(if budget > 0 {
                EventKind::PhaseAdvanced {
                    from: self.phase,
                    to: Phase::Training { item: 0, of: budget },
                }
            } else {
                test_phase(self)
            }),
            Phase::Training { item, of } => {
                if item < of {
                    match self.compute_next_training_query() {
                        Some(word) => Some(EventKind::QueryIssued {
                            word,
                            item_number: item + 1,
                        }),
                        // Nothing left to query: move on to testing early.
                        None => Some(test_phase(self)),
                    }
                } else {
                    Some(test_phase(self))
                }
            }
            Phase::Testing { item, of } => Some(if item < of {
                EventKind::QueryIssued {
                    word: self.test_items[item].clone(),
                    item_number: item + 1,
                }
            } else {
                EventKind::PhaseAdvanced {
                    from: self.phase,
                    to: Phase::Completed,
                }
            }),
            Phase::Completed => {
                let done = self
                    .log
                    .last()
                    .is_some_and(|e| matches!(e.kind, EventKind::SessionCompleted));
                (!done).then_some(EventKind::SessionCompleted)
            }
        }
    }

    /// Runs transitions until the session waits on an answer or is done.
    fn progress(&mut self) -> Result<(), SessionError> {
        while let Some(event) = self.compute_progress() {
            self.record(event);
        }
        Ok(())
    }

    fn apply(&mut self, kind: &EventKind) {
        let pool = self.resources.pool();
        match kind {
            EventKind::SessionCreated { .. } => {}
            EventKind::DemographicsRecorded { profile } => self.profile = Some(profile.clone()),
            EventKind::QueryIssued { word, item_number } => {
                self.current_query = Some(word.clone());
                match &mut self.phase {
                    Phase::Training { item, .. } | Phase::Testing { item, .. } => *item = *item_number,
                    _ => {}
                }
                if self.phase.is_training() {
                    self.queried.insert(word.clone());
                }
            }
            EventKind::AnnotationReceived { word, knows_word, label } => {
                if self.phase.is_training() {
                    if let Some(i) = pool.position(word) {
                        self.direct[i] = Some(*label);
                    }
                    self.training_answers.push((word.clone(), *knows_word));
                } else {
                    self.test_answers.push((word.clone(), *knows_word));
                }
                self.current_query = None;
            }
            EventKind::LabelsPropagated { label, targets, .. } => {
                for t in targets {
                    if let Some(i) = pool.position(t) {
                        self.propagated[i] = Some(*label);
                    }
                }
            }
            EventKind::ModelRefit {
                version,
                weights,
                bias,
                trained_on,
                degenerate,
            } => {
                self.model.weights = weights.clone();
                self.model.bias = *bias;
                self.model.version = *version;
                self.model.trained_on = *trained_on;
                self.model.degenerate = *degenerate;
            }
            EventKind::PhaseAdvanced { to, .. } => self.phase = *to,
            EventKind::SessionCompleted => {}
        }
    }

    /// Reconstructs a session from its event log, recomputing every derived
    /// event (propagation targets, refits, query choices) and rejecting the
    /// log if any differs. An empty log yields a fresh `Created` session with
    /// the default config.
    pub fn replay(resources: Arc<SessionResources>, events: &[SessionEvent]) -> Result<Self, ReplayError> {
        let Some(first) = events.first() else {
            return Ok(Session::blank(
                resources,
                SessionId("unassigned".into()),
                SessionConfig::default(),
                Vec::new(),
                Clock::Logical,
            ));
        };
        for (i, e) in events.iter().enumerate() {
            if e.sequence_no != i as u64 {
                return Err(ReplayError::SequenceGap {
                    expected: i as u64,
                    found: e.sequence_no,
                });
            }
        }
        let EventKind::SessionCreated {
            session_id,
            pool_hash,
            config,
            test_items,
        } = &first.kind
        else {
            return Err(ReplayError::MissingCreation);
        };
        if pool_hash != resources.pool().content_hash() {
            return Err(ReplayError::HashMismatch {
                expected: resources.pool().content_hash().to_string(),
                found: pool_hash.clone(),
            });
        }
        let expected_items = shuffled_test_items(&resources, config).map_err(|source| ReplayError::Session {
            sequence_no: 0,
            source,
        })?;
        if &expected_items != test_items {
            return Err(ReplayError::Divergence {
                sequence_no: 0,
                detail: "test items differ from the configured test list".into(),
            });
        }
        let clock = if first.timestamp == 0 { Clock::Logical } else { Clock::System };
        let mut s = Session::blank(resources, SessionId(session_id.clone()), *config, test_items.clone(), clock);
        s.log.push(first.clone());
        for event in &events[1..] {
            s.verify(event)?;
            s.apply(&event.kind);
            s.log.push(event.clone());
        }
        Ok(s)
    }

    fn verify(&mut self, event: &SessionEvent) -> Result<(), ReplayError> {
        let seq = event.sequence_no;
        let diverge = |detail: String| ReplayError::Divergence { sequence_no: seq, detail };
        let wrap = |source: SessionError| ReplayError::Session { sequence_no: seq, source };
        match &event.kind {
            EventKind::SessionCreated { .. } => Err(diverge("duplicate session_created".into())),
            EventKind::DemographicsRecorded { .. } => Ok(()),
            EventKind::AnnotationReceived { word, knows_word, label } => {
                if self.phase == Phase::Completed {
                    return Err(wrap(SessionError::Completed));
                }
                if self.current_query.as_deref() != Some(word.as_str()) {
                    return Err(wrap(SessionError::WrongWord {
                        expected: self.current_query.clone(),
                        got: word.clone(),
                    }));
                }
                if *label != Label::from_knows_word(*knows_word) {
                    return Err(diverge("label disagrees with knows_word".into()));
                }
                Ok(())
            }
            EventKind::LabelsPropagated { anchor, label, targets } => {
                let expected = self.compute_propagation(anchor, *label).map_err(wrap)?;
                match expected {
                    EventKind::LabelsPropagated { targets: t, .. } if &t == targets => Ok(()),
                    _ => Err(diverge(format!("propagation targets for {anchor:?} differ"))),
                }
            }
            EventKind::ModelRefit { .. } => {
                let expected = self.compute_refit().map_err(wrap)?;
                if &expected == &event.kind {
                    Ok(())
                } else {
                    Err(diverge("refit parameters differ".into()))
                }
            }
            EventKind::QueryIssued { .. } | EventKind::PhaseAdvanced { .. } | EventKind::SessionCompleted => {
                match self.compute_progress() {
                    Some(expected) if expected == event.kind => Ok(()),
                    other => Err(diverge(format!(
                        "expected {:?}, log has {}",
                        other.map(|k| k.name()),
                        event.kind.name()
                    ))),
                }
            }
        }
    }
}

/// Longest prefix of a log that ends where the session waits on the
/// annotator (a query was issued) or has completed. A crash mid-step leaves
/// an unacknowledged tail that this drops.
pub fn stable_prefix(events: &[SessionEvent]) -> &[SessionEvent] {
    let end = events
        .iter()
        .rposition(|e| matches!(e.kind, EventKind::QueryIssued { .. } | EventKind::SessionCompleted))
        .map(|i| i + 1)
        .unwrap_or(0);
    &events[..end]
}

/// Counts instances by source in the current labelled set.
pub fn labelled_counts(session: &Session) -> TrainedOn {
    TrainedOn::count(&session.labelled_set())
}
