//! Word pool ingestion and feature normalization.
//!
//! A pool file is a UTF-8 TSV with a header row. Every word gets the same
//! fixed-order feature vector:
//!
//! ```text
//! [log_frequency, length, familiarity, concreteness, imageability]
//! ```
//!
//! `log_frequency` is `ln(frequency + 1)` and `length` is the character count of
//! the word. Missing psycholinguistic cells are imputed with the column mean,
//! then every column is z-scored against the pool's own statistics. Columns
//! with fewer than two distinct observed values are dropped, which reduces the
//! feature dimension.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::label::Label;

pub const FEATURE_NAMES: [&str; 5] = [
    "log_frequency",
    "length",
    "familiarity",
    "concreteness",
    "imageability",
];

/// Largest vote count a seed record may carry.
pub const MAX_VOTES: i64 = 20;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: u64, reason: String },
    #[error("line {line}: non-positive frequency {value} for {word:?}")]
    NonPositiveFrequency { line: u64, word: String, value: f64 },
    #[error("line {line}: duplicate word {word:?}")]
    DuplicateWord { line: u64, word: String },
    #[error("missing required column {0:?}")]
    MissingColumn(String),
    #[error("pool needs at least 2 rows, found {0}")]
    TooFewRows(usize),
    #[error("zero variance in every feature column")]
    DegenerateColumns,
    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vote count {0} outside 0..=20")]
    InvalidVotes(i64),
    #[error("word {0:?} not present in pool")]
    UnknownWord(String),
    #[error("graded lexicon line {line}: {reason}")]
    Graded { line: u64, reason: String },
}

pub type Result<T> = std::result::Result<T, LexiconError>;

/// One row of a pool file before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawLexiconRecord {
    pub word: String,
    pub length: usize,
    pub frequency: f64,
    pub familiarity: Option<f64>,
    pub concreteness: Option<f64>,
    pub imageability: Option<f64>,
    pub seed_complexity_votes: Option<u32>,
}

impl RawLexiconRecord {
    pub fn new(word: &str, frequency: f64) -> Self {
        let word = word.trim().to_lowercase();
        RawLexiconRecord {
            length: word.chars().count(),
            word,
            frequency,
            familiarity: None,
            concreteness: None,
            imageability: None,
            seed_complexity_votes: None,
        }
    }

    /// Untransformed feature values in [`FEATURE_NAMES`] order.
    pub fn raw_features(&self) -> [Option<f64>; 5] {
        [
            Some((self.frequency + 1.0).ln()),
            Some(self.length as f64),
            self.familiarity,
            self.concreteness,
            self.imageability,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Pool,
    Seed,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordEntry {
    pub word: String,
    pub features: Vec<f64>,
    pub cluster_id: Option<usize>,
    pub provenance: Provenance,
}

/// Normalization statistics computed from one pool, bound to its bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolStatistics {
    pub feature_names: Vec<String>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub pool_size: usize,
    pub content_hash: String,
}

impl PoolStatistics {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Selects the retained raw features of a record, imputing missing cells
    /// with the column mean.
    pub fn raw_vector(&self, record: &RawLexiconRecord) -> Vec<f64> {
        let raw = record.raw_features();
        self.feature_names
            .iter()
            .zip(&self.mean)
            .map(|(name, mean)| {
                let idx = FEATURE_NAMES
                    .iter()
                    .position(|n| n == name)
                    .expect("feature names come from FEATURE_NAMES");
                raw[idx].unwrap_or(*mean)
            })
            .collect()
    }

    pub fn normalize_record(&self, record: &RawLexiconRecord) -> Vec<f64> {
        let raw = self.raw_vector(record);
        zscore(&raw, self).expect("raw_vector has the retained dimension")
    }
}

/// `(raw[i] - mean[i]) / std[i]`.
pub fn zscore(raw: &[f64], stats: &PoolStatistics) -> Result<Vec<f64>> {
    if raw.len() != stats.dim() {
        return Err(LexiconError::DimensionMismatch {
            expected: stats.dim(),
            found: raw.len(),
        });
    }
    Ok(raw
        .iter()
        .zip(stats.mean.iter().zip(&stats.std))
        .map(|(x, (m, s))| (x - m) / s)
        .collect())
}

/// Seed corpora mark a word complex once `threshold` annotators flagged it.
pub fn binarize_seed_label(votes: i64, threshold: u32) -> Result<Label> {
    if !(0..=MAX_VOTES).contains(&votes) {
        return Err(LexiconError::InvalidVotes(votes));
    }
    Ok(if votes >= i64::from(threshold.max(1)) {
        Label::Complex
    } else {
        Label::Simple
    })
}

/// Maps logical pool columns to header names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolSchema {
    pub word: String,
    pub frequency: String,
    pub familiarity: String,
    pub concreteness: String,
    pub imageability: String,
    pub votes: String,
}

impl Default for PoolSchema {
    fn default() -> Self {
        PoolSchema {
            word: "word".into(),
            frequency: "frequency".into(),
            familiarity: "familiarity".into(),
            concreteness: "concreteness".into(),
            imageability: "imageability".into(),
            votes: "votes".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagnosticKind {
    ImputedCell { column: String },
    ColumnDropped { column: String, reason: String },
    ColumnIgnored { column: String },
}

/// One ingestion anomaly. Serialized one per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestDiagnostic {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(flatten)]
    pub kind: DiagnosticKind,
}

pub fn write_diagnostics<W: Write>(mut out: W, diagnostics: &[IngestDiagnostic]) -> Result<()> {
    for d in diagnostics {
        let line = serde_json::to_string(d).expect("diagnostics serialize");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// An ingested, normalized pool. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Pool {
    entries: Vec<WordEntry>,
    records: Vec<RawLexiconRecord>,
    stats: PoolStatistics,
    index: HashMap<String, usize>,
    diagnostics: Vec<IngestDiagnostic>,
}

impl Pool {
    pub fn entries(&self) -> &[WordEntry] {
        &self.entries
    }

    pub fn records(&self) -> &[RawLexiconRecord] {
        &self.records
    }

    pub fn stats(&self) -> &PoolStatistics {
        &self.stats
    }

    pub fn diagnostics(&self) -> &[IngestDiagnostic] {
        &self.diagnostics
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.stats.dim()
    }

    pub fn content_hash(&self) -> &str {
        &self.stats.content_hash
    }

    pub fn position(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn get(&self, word: &str) -> Option<&WordEntry> {
        self.position(word).map(|i| &self.entries[i])
    }

    pub fn record(&self, word: &str) -> Option<&RawLexiconRecord> {
        self.position(word).map(|i| &self.records[i])
    }

    pub fn features(&self, word: &str) -> Result<&[f64]> {
        self.get(word)
            .map(|e| e.features.as_slice())
            .ok_or_else(|| LexiconError::UnknownWord(word.to_string()))
    }

    /// Position of a named feature among the retained columns.
    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.stats.feature_names.iter().position(|n| n == name)
    }

    /// Copies cluster ids onto entries; `assignment[i]` belongs to entry `i`.
    pub fn with_clusters(mut self, assignment: &[usize]) -> Self {
        assert_eq!(assignment.len(), self.entries.len());
        for (entry, &c) in self.entries.iter_mut().zip(assignment) {
            entry.cluster_id = Some(c);
        }
        self
    }

    pub fn mark_provenance(&mut self, words: &[String], provenance: Provenance) {
        for w in words {
            if let Some(i) = self.position(w) {
                self.entries[i].provenance = provenance;
            }
        }
    }
}

/// Ingests a pool TSV from disk.
pub fn ingest_pool(path: &Path, schema: &PoolSchema) -> Result<Pool> {
    let bytes = std::fs::read(path)?;
    ingest_pool_bytes(&bytes, schema)
}

pub fn content_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn is_missing(cell: &str) -> bool {
    matches!(cell.trim(), "" | "NA" | "na" | "NaN" | "nan")
}

fn parse_optional(cell: Option<&str>, line: u64, column: &str) -> Result<Option<f64>> {
    match cell {
        None => Ok(None),
        Some(c) if is_missing(c) => Ok(None),
        Some(c) => {
            let v: f64 = c.trim().parse().map_err(|_| LexiconError::Malformed {
                line,
                reason: format!("column {column:?}: cannot parse {c:?} as a number"),
            })?;
            if !v.is_finite() {
                return Err(LexiconError::Malformed {
                    line,
                    reason: format!("column {column:?}: non-finite value"),
                });
            }
            Ok(Some(v))
        }
    }
}

fn tsv_reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(true)
        .flexible(true)
        .quoting(false)
        .from_reader(bytes)
}

pub fn ingest_pool_bytes(bytes: &[u8], schema: &PoolSchema) -> Result<Pool> {
    let content_hash = content_digest(bytes);
    let mut reader = tsv_reader(bytes);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| LexiconError::Malformed {
            line: 1,
            reason: e.to_string(),
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let word_col = col(&schema.word).ok_or_else(|| LexiconError::MissingColumn(schema.word.clone()))?;
    let freq_col =
        col(&schema.frequency).ok_or_else(|| LexiconError::MissingColumn(schema.frequency.clone()))?;
    let psych_cols = [
        (FEATURE_NAMES[2], col(&schema.familiarity)),
        (FEATURE_NAMES[3], col(&schema.concreteness)),
        (FEATURE_NAMES[4], col(&schema.imageability)),
    ];
    let votes_col = col(&schema.votes);

    let mut diagnostics = Vec::new();
    let mapped: HashSet<usize> = [Some(word_col), Some(freq_col), votes_col]
        .into_iter()
        .chain(psych_cols.iter().map(|(_, c)| *c))
        .flatten()
        .collect();
    for (i, h) in headers.iter().enumerate() {
        if !mapped.contains(&i) {
            diagnostics.push(IngestDiagnostic {
                line: None,
                word: None,
                kind: DiagnosticKind::ColumnIgnored { column: h.clone() },
            });
        }
    }

    let mut records = Vec::new();
    let mut lines = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| LexiconError::Malformed {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() == 1 && row.get(0).is_some_and(|c| c.trim().is_empty()) {
            continue;
        }
        if row.len() != headers.len() {
            return Err(LexiconError::Malformed {
                line,
                reason: format!("expected {} fields, found {}", headers.len(), row.len()),
            });
        }
        let word = row.get(word_col).unwrap_or("").trim().to_lowercase();
        if word.is_empty() {
            return Err(LexiconError::Malformed {
                line,
                reason: "empty word".into(),
            });
        }
        let frequency = parse_optional(row.get(freq_col), line, &schema.frequency)?.ok_or_else(|| {
            LexiconError::Malformed {
                line,
                reason: "missing frequency".into(),
            }
        })?;
        if frequency <= 0.0 {
            return Err(LexiconError::NonPositiveFrequency {
                line,
                word,
                value: frequency,
            });
        }
        if !seen.insert(word.clone()) {
            return Err(LexiconError::DuplicateWord { line, word });
        }
        let mut psych = [None; 3];
        for (slot, (_, c)) in psych.iter_mut().zip(&psych_cols) {
            *slot = parse_optional(c.and_then(|c| row.get(c)), line, "psycholinguistic")?;
        }
        let votes = match votes_col.and_then(|c| row.get(c)) {
            None => None,
            Some(c) if is_missing(c) => None,
            Some(c) => {
                let v: i64 = c.trim().parse().map_err(|_| LexiconError::Malformed {
                    line,
                    reason: format!("cannot parse votes {c:?}"),
                })?;
                if !(0..=MAX_VOTES).contains(&v) {
                    return Err(LexiconError::Malformed {
                        line,
                        reason: format!("votes {v} outside 0..=20"),
                    });
                }
                Some(v as u32)
            }
        };
        records.push(RawLexiconRecord {
            length: word.chars().count(),
            word,
            frequency,
            familiarity: psych[0],
            concreteness: psych[1],
            imageability: psych[2],
            seed_complexity_votes: votes,
        });
        lines.push(line);
    }
    build_pool(records, &lines, content_hash, diagnostics)
}

/// Normalizes already-parsed records. `content_hash` binds the result to its source.
pub fn pool_from_records(records: Vec<RawLexiconRecord>, content_hash: String) -> Result<Pool> {
    let lines: Vec<u64> = (0..records.len() as u64).map(|i| i + 2).collect();
    let mut seen = HashSet::new();
    for (r, line) in records.iter().zip(&lines) {
        if r.frequency <= 0.0 {
            return Err(LexiconError::NonPositiveFrequency {
                line: *line,
                word: r.word.clone(),
                value: r.frequency,
            });
        }
        if !seen.insert(r.word.clone()) {
            return Err(LexiconError::DuplicateWord {
                line: *line,
                word: r.word.clone(),
            });
        }
    }
    build_pool(records, &lines, content_hash, Vec::new())
}

fn build_pool(
    records: Vec<RawLexiconRecord>,
    lines: &[u64],
    content_hash: String,
    mut diagnostics: Vec<IngestDiagnostic>,
) -> Result<Pool> {
    if records.len() < 2 {
        return Err(LexiconError::TooFewRows(records.len()));
    }
    let n = records.len();
    let raw: Vec<[Option<f64>; 5]> = records.iter().map(|r| r.raw_features()).collect();

    let mut names = Vec::new();
    let mut means = Vec::new();
    let mut stds = Vec::new();
    let mut retained = Vec::new();
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let observed: Vec<f64> = raw.iter().filter_map(|r| r[j]).collect();
        let distinct = observed
            .iter()
            .map(|v| v.to_bits())
            .collect::<HashSet<_>>()
            .len();
        if distinct < 2 {
            diagnostics.push(IngestDiagnostic {
                line: None,
                word: None,
                kind: DiagnosticKind::ColumnDropped {
                    column: name.to_string(),
                    reason: format!("{distinct} distinct value(s)"),
                },
            });
            continue;
        }
        let observed_mean = observed.iter().sum::<f64>() / observed.len() as f64;
        // After mean imputation every row contributes a value.
        let column: Vec<f64> = raw.iter().map(|r| r[j].unwrap_or(observed_mean)).collect();
        let mean = column.iter().sum::<f64>() / n as f64;
        let var = column.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if std <= 0.0 || !std.is_finite() {
            diagnostics.push(IngestDiagnostic {
                line: None,
                word: None,
                kind: DiagnosticKind::ColumnDropped {
                    column: name.to_string(),
                    reason: "zero variance".into(),
                },
            });
            continue;
        }
        names.push(name.to_string());
        means.push(mean);
        stds.push(std);
        retained.push(j);
    }
    if retained.is_empty() {
        return Err(LexiconError::DegenerateColumns);
    }

    for ((r, rec), line) in raw.iter().zip(&records).zip(lines) {
        for &j in &retained {
            if r[j].is_none() {
                diagnostics.push(IngestDiagnostic {
                    line: Some(*line),
                    word: Some(rec.word.clone()),
                    kind: DiagnosticKind::ImputedCell {
                        column: FEATURE_NAMES[j].to_string(),
                    },
                });
            }
        }
    }

    let stats = PoolStatistics {
        feature_names: names,
        mean: means,
        std: stds,
        pool_size: n,
        content_hash,
    };
    let entries: Vec<WordEntry> = records
        .iter()
        .map(|rec| WordEntry {
            word: rec.word.clone(),
            features: stats.normalize_record(rec),
            cluster_id: None,
            provenance: Provenance::Pool,
        })
        .collect();
    let index = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.word.clone(), i))
        .collect();
    Ok(Pool {
        entries,
        records,
        stats,
        index,
        diagnostics,
    })
}

/// Serializes records back to the pool TSV layout.
pub fn write_pool_tsv<W: Write>(mut out: W, records: &[RawLexiconRecord]) -> Result<()> {
    writeln!(out, "word\tfrequency\tfamiliarity\tconcreteness\timageability\tvotes")?;
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in records {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.word,
            r.frequency,
            opt(r.familiarity),
            opt(r.concreteness),
            opt(r.imageability),
            r.seed_complexity_votes.map(|v| v.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CefrLevel {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

impl CefrLevel {
    pub const ALL: [CefrLevel; 6] = [
        CefrLevel::A1,
        CefrLevel::A2,
        CefrLevel::B1,
        CefrLevel::B2,
        CefrLevel::C1,
        CefrLevel::C2,
    ];
    /// Levels carried by a graded lexicon (C2 has no graded texts).
    pub const GRADED: [CefrLevel; 5] = [
        CefrLevel::A1,
        CefrLevel::A2,
        CefrLevel::B1,
        CefrLevel::B2,
        CefrLevel::C1,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CefrLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Per-CEFR-level frequencies of words in graded texts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GradedLexicon {
    entries: BTreeMap<String, [f64; 5]>,
}

impl GradedLexicon {
    pub fn from_entries<I: IntoIterator<Item = (String, [f64; 5])>>(entries: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, (word, freqs)) in entries.into_iter().enumerate() {
            check_graded_row(&word, &freqs, i as u64 + 2)?;
            map.insert(word.to_lowercase(), freqs);
        }
        Ok(GradedLexicon { entries: map })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read(path)?)
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut reader = tsv_reader(bytes);
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| LexiconError::Graded {
                line: 1,
                reason: e.to_string(),
            })?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let word_col = headers
            .iter()
            .position(|h| h == "word")
            .ok_or_else(|| LexiconError::MissingColumn("word".into()))?;
        let level_cols: Vec<usize> = CefrLevel::GRADED
            .iter()
            .map(|l| {
                let name = l.to_string();
                headers
                    .iter()
                    .position(|h| *h == name)
                    .ok_or(LexiconError::MissingColumn(name))
            })
            .collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        for row in reader.records() {
            let row = row.map_err(|e| LexiconError::Graded {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                reason: e.to_string(),
            })?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            if row.len() != headers.len() {
                return Err(LexiconError::Graded {
                    line,
                    reason: format!("expected {} fields, found {}", headers.len(), row.len()),
                });
            }
            let word = row[word_col].trim().to_lowercase();
            let mut freqs = [0.0; 5];
            for (slot, &c) in freqs.iter_mut().zip(&level_cols) {
                *slot = row[c].trim().parse().map_err(|_| LexiconError::Graded {
                    line,
                    reason: format!("cannot parse {:?}", &row[c]),
                })?;
            }
            check_graded_row(&word, &freqs, line)?;
            if map.insert(word.clone(), freqs).is_some() {
                return Err(LexiconError::DuplicateWord { line, word });
            }
        }
        Ok(GradedLexicon { entries: map })
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "word\tA1\tA2\tB1\tB2\tC1")?;
        for (w, f) in &self.entries {
            writeln!(out, "{w}\t{}\t{}\t{}\t{}\t{}", f[0], f[1], f[2], f[3], f[4])?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64; 5]> {
        self.entries.get(word)
    }

    /// Entries in word order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64; 5])> {
        self.entries.iter().map(|(w, f)| (w.as_str(), f))
    }

    /// The level at which a word is most frequent; ties go to the lower level.
    pub fn argmax_level(&self, word: &str) -> Option<CefrLevel> {
        self.get(word).map(|f| argmax_level(f))
    }
}

pub fn argmax_level(freqs: &[f64; 5]) -> CefrLevel {
    let mut best = 0;
    for (i, v) in freqs.iter().enumerate() {
        if *v > freqs[best] {
            best = i;
        }
    }
    CefrLevel::GRADED[best]
}

fn check_graded_row(word: &str, freqs: &[f64; 5], line: u64) -> Result<()> {
    if word.trim().is_empty() {
        return Err(LexiconError::Graded {
            line,
            reason: "empty word".into(),
        });
    }
    if freqs.iter().any(|f| !f.is_finite() || *f < 0.0) {
        return Err(LexiconError::Graded {
            line,
            reason: format!("negative or non-finite frequency for {word:?}"),
        });
    }
    if freqs.iter().all(|f| *f == 0.0) {
        return Err(LexiconError::Graded {
            line,
            reason: format!("{word:?} has zero frequency at every level"),
        });
    }
    Ok(())
}
