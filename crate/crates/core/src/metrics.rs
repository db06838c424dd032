//! F-scores, Cohen's kappa, and the comparison baselines.
//!
//! `Complex` is the positive class. The headline F is the macro average of
//! the per-class F-scores.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::Label;
use crate::profile::AnnotatorProfile;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {pred} predictions vs {gold} gold labels")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("no items to score")]
    Empty,
    #[error("duplicate test word {0:?}")]
    DuplicateWord(String),
    #[error("no prediction for {0:?}")]
    MissingPrediction(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn from_labels(pred: &[Label], gold: &[Label]) -> Result<Self> {
        check_lengths(pred, gold)?;
        let mut c = Confusion::default();
        for (p, g) in pred.iter().zip(gold) {
            match (p.is_complex(), g.is_complex()) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// The same table with the classes swapped.
    pub fn swapped(&self) -> Self {
        Confusion {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }

    pub fn add(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }
}

fn check_lengths(pred: &[Label], gold: &[Label]) -> Result<()> {
    if pred.len() != gold.len() {
        return Err(MetricsError::LengthMismatch {
            pred: pred.len(),
            gold: gold.len(),
        });
    }
    if pred.is_empty() {
        return Err(MetricsError::Empty);
    }
    Ok(())
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision, recall and F for the positive class of a confusion table.
/// F is 0 when P + R = 0.
pub fn prf(c: &Confusion) -> (f64, f64, f64) {
    let p = ratio(c.tp, c.tp + c.fp);
    let r = ratio(c.tp, c.tp + c.fn_);
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Positive-class (complex) F-score.
pub fn f_score(pred: &[Label], gold: &[Label]) -> Result<f64> {
    Ok(prf(&Confusion::from_labels(pred, gold)?).2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FScores {
    pub complex: f64,
    pub simple: f64,
    pub macro_f: f64,
    pub micro_f: f64,
}

/// Per-class, macro and micro F. A class absent from both predictions and
/// gold has undefined precision and recall and is left out of the macro mean.
pub fn f_scores(c: &Confusion) -> FScores {
    let complex = prf(c).2;
    let simple = prf(&c.swapped()).2;
    let complex_present = c.tp + c.fp + c.fn_ > 0;
    let simple_present = c.tn + c.fn_ + c.fp > 0;
    let macro_f = match (complex_present, simple_present) {
        (true, true) => (complex + simple) / 2.0,
        (true, false) => complex,
        (false, true) => simple,
        (false, false) => 0.0,
    };
    // Single-label micro F equals accuracy.
    let micro_f = ratio(c.tp + c.tn, c.total());
    FScores {
        complex,
        simple,
        macro_f,
        micro_f,
    }
}

pub fn macro_f(pred: &[Label], gold: &[Label]) -> Result<f64> {
    Ok(f_scores(&Confusion::from_labels(pred, gold)?).macro_f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub value: f64,
    /// Set when either rater is constant, so chance agreement says little.
    pub degenerate: bool,
}

pub fn kappa_from_confusion(c: &Confusion) -> Kappa {
    let n = c.total() as f64;
    let p_o = (c.tp + c.tn) as f64 / n;
    let pred_pos = (c.tp + c.fp) as f64 / n;
    let gold_pos = (c.tp + c.fn_) as f64 / n;
    let p_e = pred_pos * gold_pos + (1.0 - pred_pos) * (1.0 - gold_pos);
    let pred_constant = c.tp + c.fp == 0 || c.fn_ + c.tn == 0;
    let gold_constant = c.tp + c.fn_ == 0 || c.fp + c.tn == 0;
    let degenerate = pred_constant || gold_constant;
    let value = if p_e >= 1.0 {
        if p_o >= 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (p_o - p_e) / (1.0 - p_e)
    };
    Kappa { value, degenerate }
}

pub fn cohen_kappa(pred: &[Label], gold: &[Label]) -> Result<Kappa> {
    Ok(kappa_from_confusion(&Confusion::from_labels(pred, gold)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelledTestSet {
    pub annotator: String,
    #[serde(default)]
    pub profile: Option<AnnotatorProfile>,
    pub items: Vec<(String, Label)>,
}

impl LabelledTestSet {
    pub fn new(annotator: impl Into<String>, items: Vec<(String, Label)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (w, _) in &items {
            if !seen.insert(w.as_str()) {
                return Err(MetricsError::DuplicateWord(w.clone()));
            }
        }
        Ok(LabelledTestSet {
            annotator: annotator.into(),
            profile: None,
            items,
        })
    }

    pub fn with_profile(mut self, profile: AnnotatorProfile) -> Self {
        self.profile = Some(profile);
        self
    }

    pub fn words(&self) -> Vec<&str> {
        self.items.iter().map(|(w, _)| w.as_str()).collect()
    }

    pub fn gold(&self) -> Vec<Label> {
        self.items.iter().map(|(_, l)| *l).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Parses `word\tlabel` lines (header optional).
    pub fn parse(annotator: impl Into<String>, text: &str) -> Result<Self> {
        let mut items = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let word = parts.next().unwrap_or("").trim();
            let label = parts.next().unwrap_or("").trim();
            if i == 0 && word == "word" {
                continue;
            }
            let label: Label = label.parse().map_err(|reason| MetricsError::Malformed { line: i + 1, reason })?;
            items.push((word.to_lowercase(), label));
        }
        LabelledTestSet::new(annotator, items)
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "word\tlabel")?;
        for (w, l) in &self.items {
            writeln!(out, "{w}\t{l}")?;
        }
        Ok(())
    }
}

/// Flags words no other group member annotated.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPrediction {
    pub labels: Vec<Label>,
    pub unannotated: Vec<String>,
}

pub const GROUP_AVERAGE_THRESHOLD: f64 = 0.10;

/// Complex iff more than `threshold` of the group marked the word complex.
/// With `leave_one_out`, sets from the target's annotator are skipped.
pub fn baseline_group_average_with(
    group: &[LabelledTestSet],
    target: &LabelledTestSet,
    threshold: f64,
    leave_one_out: bool,
) -> GroupPrediction {
    let mut votes: HashMap<&str, (usize, usize)> = HashMap::new();
    for set in group {
        if leave_one_out && set.annotator == target.annotator {
            continue;
        }
        for (w, l) in &set.items {
            let v = votes.entry(w.as_str()).or_default();
            v.0 += usize::from(l.is_complex());
            v.1 += 1;
        }
    }
    let mut unannotated = Vec::new();
    let labels = target
        .items
        .iter()
        .map(|(w, _)| match votes.get(w.as_str()) {
            Some(&(complex, n)) if n > 0 => Label::complex_if(complex as f64 / n as f64 > threshold),
            _ => {
                unannotated.push(w.clone());
                Label::Simple
            }
        })
        .collect();
    GroupPrediction { labels, unannotated }
}

pub fn baseline_group_average(group: &[LabelledTestSet], target: &LabelledTestSet) -> GroupPrediction {
    baseline_group_average_with(group, target, GROUP_AVERAGE_THRESHOLD, true)
}

/// Complex iff the word's frequency is below `threshold`; unknown words count as frequency 0.
pub fn baseline_frequency(frequency: &HashMap<String, f64>, threshold: f64, words: &[&str]) -> Vec<Label> {
    words
        .iter()
        .map(|w| Label::complex_if(frequency.get(*w).copied().unwrap_or(0.0) < threshold))
        .collect()
}

/// Picks the threshold maximizing macro-F over the calibration sets. Candidates
/// are midpoints between consecutive distinct frequencies plus both extremes;
/// ties go to the smallest threshold.
pub fn sweep_frequency_threshold(frequency: &HashMap<String, f64>, calibration: &[LabelledTestSet]) -> f64 {
    let mut values: Vec<f64> = calibration
        .iter()
        .flat_map(|s| s.items.iter().map(|(w, _)| frequency.get(w).copied().unwrap_or(0.0)))
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut candidates = vec![0.0];
    candidates.extend(values.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    if let Some(last) = values.last() {
        candidates.push(last + 1.0);
    }
    let mut best = (f64::NEG_INFINITY, 0.0);
    for t in candidates {
        let mut c = Confusion::default();
        for set in calibration {
            let pred = baseline_frequency(frequency, t, &set.words());
            if let Ok(cm) = Confusion::from_labels(&pred, &set.gold()) {
                c.add(&cm);
            }
        }
        if c.total() == 0 {
            continue;
        }
        let f = f_scores(&c).macro_f;
        if f > best.0 {
            best = (f, t);
        }
    }
    best.1
}

pub fn baseline_all_simple(n: usize) -> Vec<Label> {
    vec![Label::Simple; n]
}

/// Parses a `word\tlabel` predictions file.
pub fn read_predictions<R: BufRead>(input: R) -> Result<HashMap<String, Label>> {
    let mut map = HashMap::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| MetricsError::Io(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, label) = line.split_once('\t').ok_or_else(|| MetricsError::Malformed {
            line: i + 1,
            reason: "expected word<TAB>label".into(),
        })?;
        if i == 0 && word == "word" {
            continue;
        }
        let label = label
            .parse()
            .map_err(|reason| MetricsError::Malformed { line: i + 1, reason })?;
        map.insert(word.trim().to_lowercase(), label);
    }
    Ok(map)
}

pub fn write_predictions<W: Write>(mut out: W, predictions: &[(String, Label)]) -> std::io::Result<()> {
    writeln!(out, "word\tlabel")?;
    for (w, l) in predictions {
        writeln!(out, "{w}\t{l}")?;
    }
    Ok(())
}

/// Looks up stored predictions from an external system for each word.
pub fn baseline_external(predictions: &HashMap<String, Label>, words: &[&str]) -> Result<Vec<Label>> {
    words
        .iter()
        .map(|w| {
            predictions
                .get(*w)
                .copied()
                .ok_or_else(|| MetricsError::MissingPrediction(w.to_string()))
        })
        .collect()
}

/// One system's scores for one proficiency group, pooled over annotators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub f_score: f64,
    pub f_complex: f64,
    pub kappa: f64,
    pub kappa_degenerate: bool,
    pub test_size: usize,
    pub confusion: Confusion,
}

impl ReportCell {
    pub fn from_confusion(confusion: Confusion) -> Self {
        let f = f_scores(&confusion);
        let k = kappa_from_confusion(&confusion);
        ReportCell {
            f_score: f.macro_f,
            f_complex: f.complex,
            kappa: k.value,
            kappa_degenerate: k.degenerate,
            test_size: confusion.total(),
            confusion,
        }
    }
}

/// Scores per system (rows) and proficiency group (columns).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub systems: Vec<String>,
    pub groups: Vec<String>,
    pub cells: BTreeMap<String, BTreeMap<String, ReportCell>>,
}

impl EvaluationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds predictions for one annotator; confusion counts pool per cell.
    pub fn add(&mut self, system: &str, group: &str, pred: &[Label], gold: &[Label]) -> Result<()> {
        let c = Confusion::from_labels(pred, gold)?;
        if !self.systems.iter().any(|s| s == system) {
            self.systems.push(system.to_string());
        }
        if !self.groups.iter().any(|g| g == group) {
            self.groups.push(group.to_string());
        }
        let cell = self
            .cells
            .entry(system.to_string())
            .or_default()
            .entry(group.to_string())
            .or_insert_with(|| ReportCell::from_confusion(Confusion::default()));
        let mut pooled = cell.confusion;
        pooled.add(&c);
        *cell = ReportCell::from_confusion(pooled);
        Ok(())
    }

    pub fn cell(&self, system: &str, group: &str) -> Option<&ReportCell> {
        self.cells.get(system)?.get(group)
    }

    /// Table layout: an F panel, a kappa panel, then test sizes.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["panel".to_string(), "system".to_string()];
        header.extend(self.groups.iter().cloned());
        w.write_record(&header)?;
        let value = |s: &str, g: &str, f: fn(&ReportCell) -> String| self.cell(s, g).map(f).unwrap_or_default();
        for (panel, getter) in [
            ("f_score", (|c: &ReportCell| format!("{:.3}", c.f_score)) as fn(&ReportCell) -> String),
            ("kappa", |c: &ReportCell| format!("{:.3}", c.kappa)),
        ] {
            for s in &self.systems {
                let mut row = vec![panel.to_string(), s.clone()];
                row.extend(self.groups.iter().map(|g| value(s, g, getter)));
                w.write_record(&row)?;
            }
        }
        let mut row = vec!["test_size".to_string(), String::new()];
        row.extend(self.groups.iter().map(|g| {
            self.systems
                .first()
                .and_then(|s| self.cell(s, g))
                .map(|c| c.test_size.to_string())
                .unwrap_or_default()
        }));
        w.write_record(&row)?;
        w.flush()
    }
}
