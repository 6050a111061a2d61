use std::collections::HashSet;
use std::io::{BufRead, Write};

use chrono::NaiveDate;
use log::warn;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One ingested post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: u64,
    pub user_id: u64,
    pub date: NaiveDate,
    #[serde(alias = "tweet")]
    pub text: String,
    pub user_lang: String,
    /// Explicit retweet flag, when the source provides one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweet: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuplicatePolicy {
    /// Skip the later record and count it as rejected.
    Reject,
    /// Abort parsing.
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateWindow {
    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

impl Default for DateWindow {
    /// September 2010 through August 2013.
    fn default() -> Self {
        DateWindow {
            start: NaiveDate::from_ymd_opt(2010, 9, 1).unwrap(),
            end: NaiveDate::from_ymd_opt(2013, 8, 31).unwrap(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub max_text_chars: usize,
    pub window: DateWindow,
    pub duplicates: DuplicatePolicy,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            max_text_chars: 1000,
            window: DateWindow::default(),
            duplicates: DuplicatePolicy::Reject,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based physical line (CSV: including the header line).
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Default)]
pub struct ParseOutcome {
    pub records: Vec<TweetRecord>,
    pub rejected: Vec<Rejection>,
}

impl ParseOutcome {
    pub fn accepted(&self) -> usize {
        self.records.len()
    }
}

struct Validator<'a> {
    config: &'a IngestConfig,
    seen: HashSet<u64>,
    outcome: ParseOutcome,
}

impl<'a> Validator<'a> {
    fn new(config: &'a IngestConfig) -> Self {
        Validator {
            config,
            seen: HashSet::new(),
            outcome: ParseOutcome::default(),
        }
    }

    fn reject(&mut self, line: usize, reason: String) {
        warn!("skipping line {line}: {reason}");
        self.outcome.rejected.push(Rejection { line, reason });
    }

    fn offer(&mut self, line: usize, rec: TweetRecord) -> Result<()> {
        if rec.text.trim().is_empty() {
            self.reject(line, "empty text".into());
            return Ok(());
        }
        let nchars = rec.text.chars().count();
        if nchars > self.config.max_text_chars {
            self.reject(
                line,
                format!("text has {nchars} characters, limit is {}", self.config.max_text_chars),
            );
            return Ok(());
        }
        if !self.config.window.contains(rec.date) {
            self.reject(line, format!("date {} outside study window", rec.date));
            return Ok(());
        }
        if !self.seen.insert(rec.tweet_id) {
            match self.config.duplicates {
                DuplicatePolicy::Reject => {
                    self.reject(line, format!("duplicate tweet_id {}", rec.tweet_id));
                    return Ok(());
                }
                DuplicatePolicy::Fail => {
                    return Err(Error::invalid(format!(
                        "line {line}: duplicate tweet_id {}",
                        rec.tweet_id
                    )));
                }
            }
        }
        self.outcome.records.push(rec);
        Ok(())
    }
}

/// Parses a line-delimited record stream.
///
/// Malformed lines and records violating the [`TweetRecord`] invariants are
/// skipped and reported in [`ParseOutcome::rejected`]; only I/O failures (and
/// duplicates under [`DuplicatePolicy::Fail`]) abort.
pub fn parse_corpus<R: BufRead>(
    input: R,
    format: InputFormat,
    config: &IngestConfig,
) -> Result<ParseOutcome> {
    let mut v = Validator::new(config);
    match format {
        InputFormat::Jsonl => {
            for (i, line) in input.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<TweetRecord>(&line) {
                    Ok(rec) => v.offer(i + 1, rec)?,
                    Err(e) => v.reject(i + 1, e.to_string()),
                }
            }
        }
        InputFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
            let headers = reader.headers()?.clone();
            let mut row = csv::StringRecord::new();
            loop {
                match reader.read_record(&mut row) {
                    Ok(false) => break,
                    Ok(true) => {
                        let line = row.position().map_or(0, |p| p.line() as usize);
                        match row.deserialize::<TweetRecord>(Some(&headers)) {
                            Ok(rec) => v.offer(line, rec)?,
                            Err(e) => v.reject(line, e.to_string()),
                        }
                    }
                    Err(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => return Err(e.into()),
                    Err(e) => {
                        let line = e.position().map_or(0, |p| p.line() as usize);
                        v.reject(line, e.to_string());
                    }
                }
            }
        }
    }
    Ok(v.outcome)
}

pub fn write_corpus<W: Write>(records: &[TweetRecord], mut out: W) -> Result<()> {
    for rec in records {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
