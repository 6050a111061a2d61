//! Rater categories and the labeled-corpus row shared by several stages.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ingest::TweetRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Signal,
    Noise,
    NotEnglish,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Signal, Category::Noise, Category::NotEnglish];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Signal => "signal",
            Category::Noise => "noise",
            Category::NotEnglish => "not_english",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signal" => Ok(Category::Signal),
            "noise" => Ok(Category::Noise),
            "not_english" => Ok(Category::NotEnglish),
            other => Err(Error::invalid(format!("unknown category `{other}`"))),
        }
    }
}

/// One agreement-resolved tweet as exported by the annotation pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledTweet {
    #[serde(flatten)]
    pub record: TweetRecord,
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<i8>,
}

pub fn write_labeled<W: Write>(rows: &[LabeledTweet], mut out: W) -> Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_labeled<R: BufRead>(input: R) -> Result<Vec<LabeledTweet>> {
    let mut rows = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: LabeledTweet = serde_json::from_str(&line)
            .map_err(|e| Error::invalid(format!("labeled corpus line {}: {e}", i + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}
