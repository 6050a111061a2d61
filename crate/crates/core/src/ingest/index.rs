use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::tokenize::{stem, tokenize};
use super::TweetRecord;
use crate::{Error, Result};

/// Inverted index from lexeme to the ids of tweets containing it.
///
/// Persisted next to a corpus as one JSON object per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexemeIndex {
    postings: BTreeMap<String, Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct Posting {
    lexeme: String,
    tweet_ids: Vec<u64>,
}

impl LexemeIndex {
    pub fn build<'a, I: IntoIterator<Item = &'a TweetRecord>>(records: I) -> Self {
        let mut postings: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for rec in records {
            for l in tokenize(&rec.text).lexemes {
                postings.entry(l).or_default().push(rec.tweet_id);
            }
        }
        for ids in postings.values_mut() {
            ids.sort_unstable();
            ids.dedup();
        }
        LexemeIndex { postings }
    }

    /// Tweets containing `word` after lowercasing and stemming.
    pub fn query(&self, word: &str) -> &[u64] {
        self.postings
            .get(&stem(&word.to_lowercase()))
            .map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.postings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.postings.is_empty()
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for (lexeme, ids) in &self.postings {
            serde_json::to_writer(
                &mut out,
                &Posting {
                    lexeme: lexeme.clone(),
                    tweet_ids: ids.clone(),
                },
            )?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut postings = BTreeMap::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let p: Posting = serde_json::from_str(&line)
                .map_err(|e| Error::invalid(format!("index line {}: {e}", i + 1)))?;
            postings.insert(p.lexeme, p.tweet_ids);
        }
        Ok(LexemeIndex { postings })
    }
}
