//! Per-session append-only JSONL event logs plus an index of session ids.
//!
//! Layout under the data directory:
//! `index.jsonl` (one `{"session_id", "created_at"}` line per session) and
//! `sessions/<id>.jsonl` (the session's events). Every append is fsynced
//! before it returns.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use perscwi::session::{write_events, SessionEvent};
use serde::{Deserialize, Serialize};

pub const INDEX_FILE: &str = "index.jsonl";
pub const SESSIONS_DIR: &str = "sessions";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub session_id: String,
    pub created_at: u64,
}

#[derive(Debug, Clone)]
pub struct LogStore {
    dir: PathBuf,
}

/// Parses JSON lines up to the first line that does not parse. A crash in
/// the middle of an append leaves at most one torn trailing line.
fn read_lines_tolerant<T: for<'de> Deserialize<'de>>(path: &Path) -> io::Result<(Vec<T>, bool)> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok((Vec::new(), false)),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    for line in BufReader::new(file).split(b'\n') {
        let line = line?;
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        match serde_json::from_slice(&line) {
            Ok(v) => out.push(v),
            Err(_) => return Ok((out, true)),
        }
    }
    Ok((out, false))
}

fn append_synced(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(bytes)?;
    f.sync_data()
}

impl LogStore {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(dir.join(SESSIONS_DIR))?;
        Ok(LogStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn log_path(&self, session_id: &str) -> PathBuf {
        self.dir.join(SESSIONS_DIR).join(format!("{session_id}.jsonl"))
    }

    pub fn append(&self, session_id: &str, events: &[SessionEvent]) -> io::Result<()> {
        if events.is_empty() {
            return Ok(());
        }
        let mut buf = Vec::new();
        write_events(&mut buf, events)?;
        append_synced(&self.log_path(session_id), &buf)
    }

    pub fn register(&self, entry: &IndexEntry) -> io::Result<()> {
        let mut line = serde_json::to_vec(entry).map_err(io::Error::other)?;
        line.push(b'\n');
        append_synced(&self.dir.join(INDEX_FILE), &line)
    }

    pub fn index(&self) -> io::Result<Vec<IndexEntry>> {
        Ok(read_lines_tolerant(&self.dir.join(INDEX_FILE))?.0)
    }

    /// Every event that parses, and whether a torn tail was skipped.
    pub fn load(&self, session_id: &str) -> io::Result<(Vec<SessionEvent>, bool)> {
        read_lines_tolerant(&self.log_path(session_id))
    }

    /// Atomically replaces a log, used to cut an unacknowledged tail.
    pub fn rewrite(&self, session_id: &str, events: &[SessionEvent]) -> io::Result<()> {
        let path = self.log_path(session_id);
        let tmp = path.with_extension("jsonl.tmp");
        {
            let mut f = File::create(&tmp)?;
            write_events(&mut f, events)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        if let Ok(d) = File::open(path.parent().expect("log has a parent")) {
            let _ = d.sync_all();
        }
        Ok(())
    }
}
