//! Class statistics built from agreement-resolved annotations, and the
//! corpus-similarity measures computed against them.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::checksum::sha256_hex;
use crate::ingest::{split_tokens, STEMMER_ID};
use crate::labels::{Category, LabeledTweet};
use crate::{Error, Result};

pub const STATS_VERSION: u32 = 1;

/// Share of the most frequent distinct tokens kept as weighted words.
pub const COMMON_FRACTION: f64 = 0.25;

/// Statistics of one annotated class (signal or noise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub tweets: u64,
    /// Token occurrence counts over the class.
    pub token_counts: BTreeMap<String, u64>,
    pub token_total: u64,
    /// Most common tokens with weight `count / token_total`.
    pub common_weights: BTreeMap<String, f64>,
    /// Distinct adjacent pairs, written `first second`.
    pub bigrams: BTreeSet<String>,
    /// Bigram occurrences over the class.
    pub bigram_total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub version: u32,
    pub stemmer: String,
    pub signal: ClassStats,
    pub noise: ClassStats,
    pub notenglish_words: BTreeSet<String>,
}

fn bigram_key(a: &str, b: &str) -> String {
    format!("{a} {b}")
}

/// Tokens kept by the top-fraction cutoff: the `ceil(fraction * distinct)`
/// most frequent, plus every token tied with the last one kept.
pub fn top_fraction(counts: &BTreeMap<String, u64>, fraction: f64) -> BTreeSet<String> {
    if counts.is_empty() {
        return BTreeSet::new();
    }
    let mut sorted: Vec<u64> = counts.values().copied().collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let k = ((fraction * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let cutoff = sorted[k - 1];
    counts
        .iter()
        .filter(|(_, &c)| c >= cutoff)
        .map(|(t, _)| t.clone())
        .collect()
}

fn class_stats(texts: &[&str], name: &str) -> Result<ClassStats> {
    if texts.is_empty() {
        return Err(Error::domain(format!("no {name} tweets to build statistics from")));
    }
    let mut token_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut bigrams = BTreeSet::new();
    let mut bigram_total = 0u64;
    for text in texts {
        let tokens = split_tokens(text);
        for t in &tokens {
            *token_counts.entry(t.clone()).or_default() += 1;
        }
        for w in tokens.windows(2) {
            bigrams.insert(bigram_key(&w[0], &w[1]));
            bigram_total += 1;
        }
    }
    let token_total: u64 = token_counts.values().sum();
    if token_total == 0 {
        return Err(Error::domain(format!("{name} tweets contain no tokens")));
    }
    let common_weights = top_fraction(&token_counts, COMMON_FRACTION)
        .into_iter()
        .map(|t| {
            let w = token_counts[&t] as f64 / token_total as f64;
            (t, w)
        })
        .collect();
    Ok(ClassStats {
        tweets: texts.len() as u64,
        token_counts,
        token_total,
        common_weights,
        bigrams,
        bigram_total,
    })
}

impl CorpusStats {
    pub fn build(resolved: &[LabeledTweet]) -> Result<Self> {
        let texts = |c: Category| -> Vec<&str> {
            resolved
                .iter()
                .filter(|t| t.category == c)
                .map(|t| t.record.text.as_str())
                .collect()
        };
        let foreign = texts(Category::NotEnglish);
        if foreign.is_empty() {
            return Err(Error::domain("no not_english tweets to build statistics from"));
        }
        Ok(CorpusStats {
            version: STATS_VERSION,
            stemmer: STEMMER_ID.to_string(),
            signal: class_stats(&texts(Category::Signal), "signal")?,
            noise: class_stats(&texts(Category::Noise), "noise")?,
            notenglish_words: foreign.iter().flat_map(|t| split_tokens(t)).collect(),
        })
    }

    /// Canonical serialization; the checksum is taken over these bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("stats serialize");
        bytes.push(b'\n');
        bytes
    }

    pub fn checksum(&self) -> String {
        sha256_hex(&self.to_bytes())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let stats: CorpusStats = serde_json::from_slice(&fs::read(path)?)?;
        if stats.version != STATS_VERSION {
            return Err(Error::invalid(format!(
                "stats bundle version {} is not supported (expected {STATS_VERSION})",
                stats.version
            )));
        }
        if stats.stemmer != STEMMER_ID {
            return Err(Error::invalid(format!(
                "stats bundle built with stemmer `{}`, this build uses `{STEMMER_ID}`",
                stats.stemmer
            )));
        }
        Ok(stats)
    }
}

/// Raw similarity `s` of a tweet to a class and its Poisson uncertainty.
pub fn similarity<S: AsRef<str>>(
    tokens: &[S],
    counts: &BTreeMap<String, u64>,
    elements: u64,
) -> Result<(f64, f64)> {
    if elements == 0 {
        return Err(Error::domain("similarity against an empty corpus"));
    }
    let hits: u64 = tokens
        .iter()
        .map(|t| counts.get(t.as_ref()).copied().unwrap_or(0))
        .sum();
    let e = elements as f64;
    Ok((hits as f64 / e, (hits as f64).sqrt() / e))
}

/// Similarity divided by its uncertainty; 0 when nothing is shared.
pub fn similarity_ratio<S: AsRef<str>>(
    tokens: &[S],
    counts: &BTreeMap<String, u64>,
    elements: u64,
) -> Result<f64> {
    let (s, sigma) = similarity(tokens, counts, elements)?;
    Ok(if s == 0.0 { 0.0 } else { s / sigma })
}

/// Bigram occurrences of the tweet found in the class set, over the class
/// bigram total.
pub fn bigram_share<S: AsRef<str>>(tokens: &[S], bigrams: &BTreeSet<String>, total: u64) -> Result<f64> {
    if total == 0 {
        return Err(Error::domain("bigram share against a corpus with no bigrams"));
    }
    let hits = tokens
        .windows(2)
        .filter(|w| bigrams.contains(&bigram_key(w[0].as_ref(), w[1].as_ref())))
        .count();
    Ok(hits as f64 / total as f64)
}

pub fn common_weighted<S: AsRef<str>>(tokens: &[S], weights: &BTreeMap<String, f64>) -> f64 {
    tokens
        .iter()
        .filter_map(|t| weights.get(t.as_ref()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::TweetRecord;
    use chrono::NaiveDate;

    fn labeled(id: u64, text: &str, category: Category) -> LabeledTweet {
        LabeledTweet {
            record: TweetRecord {
                tweet_id: id,
                user_id: id,
                date: NaiveDate::from_ymd_opt(2012, 3, 1).unwrap(),
                text: text.into(),
                user_lang: "en".into(),
                retweet: None,
            },
            category,
            sentiment: None,
        }
    }

    fn small() -> Vec<LabeledTweet> {
        vec![
            labeled(1, "i feel dizzy on atripla", Category::Signal),
            labeled(2, "new hiv drug approved", Category::Noise),
            labeled(3, "hiv drug news", Category::Noise),
            labeled(4, "la droga para el vih", Category::NotEnglish),
        ]
    }

    #[test]
    fn similarity_examples() {
        let counts: BTreeMap<String, u64> = [("hiv".to_string(), 4)].into();
        assert_eq!(similarity_ratio(&["hiv"], &counts, 4).unwrap(), 2.0);
        let (s, sigma) = similarity(&["hiv"], &counts, 4).unwrap();
        assert_eq!((s, sigma), (1.0, 0.5));
        assert_eq!(similarity_ratio(&["truvada"], &counts, 4).unwrap(), 0.0);
        assert!(similarity_ratio(&["hiv"], &counts, 0).is_err());

        let doubled: BTreeMap<String, u64> = [("hiv".to_string(), 8)].into();
        assert_eq!(similarity(&["hiv", "x"], &doubled, 8).unwrap().0, s);
    }

    #[test]
    fn bigram_examples() {
        let set: BTreeSet<String> = ["hiv drug".to_string(), "drug approved".to_string()].into();
        assert_eq!(bigram_share(&["hiv"], &set, 10).unwrap(), 0.0);
        assert_eq!(bigram_share(&["hiv", "drug", "approved"], &set, 10).unwrap(), 0.2);
        assert_eq!(bigram_share(&["my", "dreams"], &set, 10).unwrap(), 0.0);
        assert!(bigram_share(&["hiv", "drug"], &set, 0).is_err());
    }

    #[test]
    fn common_weighted_examples() {
        let w: BTreeMap<String, f64> = [("hiv".to_string(), 0.25), ("drug".to_string(), 0.125)].into();
        assert_eq!(common_weighted(&["my", "dreams"], &w), 0.0);
        assert_eq!(common_weighted(&["hiv"], &w), 0.25);
        assert_eq!(common_weighted(&["hiv", "drug", "hiv"], &w), 0.625);
    }

    #[test]
    fn top_fraction_includes_ties() {
        let counts: BTreeMap<String, u64> =
            [("a", 5), ("b", 3), ("c", 3), ("d", 1), ("e", 1), ("f", 1), ("g", 1), ("h", 1)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
        // ceil(0.25 * 8) = 2, and c ties with b
        let top: Vec<String> = top_fraction(&counts, 0.25).into_iter().collect();
        assert_eq!(top, ["a", "b", "c"]);
    }

    #[test]
    fn build_stats() {
        let stats = CorpusStats::build(&small()).unwrap();
        assert_eq!(stats.noise.tweets, 2);
        assert_eq!(stats.noise.token_counts["hiv"], 2);
        assert_eq!(stats.noise.token_total, 7);
        assert_eq!(stats.noise.bigram_total, 5);
        assert!(stats.noise.bigrams.contains("hiv drug"));
        assert_eq!(stats.noise.common_weights.len(), 2);
        assert_eq!(stats.noise.common_weights["drug"], 2.0 / 7.0);
        // a single tweet: every token ties at count one
        assert_eq!(stats.signal.common_weights.len(), 5);
        assert!(stats.notenglish_words.contains("vih"));

        let mut reversed = small();
        reversed.reverse();
        assert_eq!(CorpusStats::build(&reversed).unwrap(), stats);
    }

    #[test]
    fn empty_class_is_named() {
        let mut only = small();
        only.retain(|t| t.category != Category::Signal);
        let err = CorpusStats::build(&only).unwrap_err().to_string();
        assert!(err.contains("signal"), "{err}");
    }

    #[test]
    fn bundle_round_trip() {
        let stats = CorpusStats::build(&small()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stats.json");
        stats.write(&path).unwrap();
        let back = CorpusStats::read(&path).unwrap();
        assert_eq!(back, stats);
        assert_eq!(back.checksum(), sha256_hex(&fs::read(&path).unwrap()));
    }
}
