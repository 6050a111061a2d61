//! Append-only annotation log and compacted snapshots.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Annotation;
use crate::{Error, Result};

/// One JSON annotation per line, synced to disk after every append.
#[derive(Debug)]
pub struct AnnotationLog {
    path: PathBuf,
    file: File,
}

impl AnnotationLog {
    pub fn open(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(AnnotationLog {
            path: path.to_path_buf(),
            file,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, a: &Annotation) -> Result<()> {
        let mut line = serde_json::to_vec(a)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(())
    }
}

/// Reads a log. A malformed final line without a trailing newline is taken
/// as a write cut short by a crash and dropped; any other malformed line is
/// an error.
pub fn read_log(path: &Path) -> Result<Vec<Annotation>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(path)?;
    let complete = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(a) => out.push(a),
            Err(e) if i + 1 == lines.len() && !complete => {
                log::warn!("dropping truncated last line of {}: {e}", path.display());
            }
            Err(e) => {
                return Err(Error::invalid(format!("{} line {}: {e}", path.display(), i + 1)));
            }
        }
    }
    Ok(out)
}

/// Compacted state: every annotation up to `log_entries` lines of the log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub log_entries: usize,
    pub annotations: Vec<Annotation>,
}

impl Snapshot {
    pub fn write(&self, path: &Path) -> Result<()> {
        // write-then-rename so a crash never leaves a half snapshot
        let tmp = path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            serde_json::to_writer(&mut f, self)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }

    /// Snapshot contents followed by the log entries written after it.
    pub fn recover(snapshot: Option<&Path>, log: &Path) -> Result<Vec<Annotation>> {
        let entries = read_log(log)?;
        let Some(snap_path) = snapshot.filter(|p| p.exists()) else {
            return Ok(entries);
        };
        let snap = Snapshot::read(snap_path)?;
        if snap.log_entries > entries.len() {
            return Err(Error::invalid(format!(
                "snapshot covers {} log entries but the log has {}",
                snap.log_entries,
                entries.len()
            )));
        }
        let mut all = snap.annotations;
        all.extend(entries.into_iter().skip(snap.log_entries));
        Ok(all)
    }
}

/// Counts lines in a log without parsing them.
pub fn log_len(path: &Path) -> Result<usize> {
    if !path.exists() {
        return Ok(0);
    }
    Ok(BufReader::new(File::open(path)?).lines().count())
}
