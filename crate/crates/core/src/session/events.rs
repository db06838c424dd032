use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::label::Label;
use crate::model::TrainedOn;
use crate::profile::AnnotatorProfile;

use super::{Phase, SessionConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionEvent {
    pub sequence_no: u64,
    /// Milliseconds since the Unix epoch, or the sequence number under a logical clock.
    pub timestamp: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum EventKind {
    SessionCreated {
        session_id: String,
        pool_hash: String,
        config: SessionConfig,
        test_items: Vec<String>,
    },
    DemographicsRecorded {
        profile: AnnotatorProfile,
    },
    QueryIssued {
        word: String,
        item_number: usize,
    },
    AnnotationReceived {
        word: String,
        knows_word: bool,
        label: Label,
    },
    LabelsPropagated {
        anchor: String,
        label: Label,
        targets: Vec<String>,
    },
    ModelRefit {
        version: u64,
        weights: Vec<f64>,
        bias: f64,
        trained_on: TrainedOn,
        degenerate: bool,
    },
    PhaseAdvanced {
        from: Phase,
        to: Phase,
    },
    SessionCompleted,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::SessionCreated { .. } => "session_created",
            EventKind::DemographicsRecorded { .. } => "demographics_recorded",
            EventKind::QueryIssued { .. } => "query_issued",
            EventKind::AnnotationReceived { .. } => "annotation_received",
            EventKind::LabelsPropagated { .. } => "labels_propagated",
            EventKind::ModelRefit { .. } => "model_refit",
            EventKind::PhaseAdvanced { .. } => "phase_advanced",
            EventKind::SessionCompleted => "session_completed",
        }
    }
}

/// Appends events as JSON lines.
pub fn write_events<W: Write>(mut out: W, events: &[SessionEvent]) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a JSON-lines event log. Blank lines are skipped.
pub fn read_events<R: BufRead>(input: R) -> std::io::Result<Vec<SessionEvent>> {
    let mut events = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event = serde_json::from_str(&line).map_err(|e| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("event log line {}: {e}", i + 1))
        })?;
        events.push(event);
    }
    Ok(events)
}
