//! Two-rater annotation pool: task serving, rating intake, agreement
//! resolution and export of agreed labels.

mod log;
mod pool;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::labels::Category;

pub use self::log::{read_log, AnnotationLog, Snapshot};
pub use pool::{check_sentiment, AnnotationService, Pool, PoolConfig, PoolStats, SubmitError};

pub const SENTIMENT_MIN: i8 = -5;
pub const SENTIMENT_MAX: i8 = 5;

/// How two sentiment ratings combine, stated alongside every export.
pub const SENTIMENT_CONVENTION: &str = "mean of the agreeing raters' sentiments, rounded half away from zero";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub tweet_id: u64,
    pub rater: String,
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<i8>,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pending,
    Agreed,
    Disagreed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedLabel {
    pub tweet_id: u64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<i8>,
}

/// Mean of integer ratings rounded half away from zero.
pub fn combine_sentiments(values: &[i8]) -> Option<i8> {
    if values.is_empty() {
        return None;
    }
    let mean = values.iter().map(|&v| f64::from(v)).sum::<f64>() / values.len() as f64;
    Some(mean.round() as i8)
}

/// Resolution of a tweet's ratings, in submission order.
///
/// Two ratings agree when their categories match. With a third rating (only
/// requested for disagreements) the majority category wins, if there is one.
pub fn resolve(tweet_id: u64, ratings: &[Annotation], third_rater: bool) -> ResolvedLabel {
    let pending = ResolvedLabel {
        tweet_id,
        status: Status::Pending,
        category: None,
        sentiment: None,
    };
    let disagreed = ResolvedLabel {
        status: Status::Disagreed,
        ..pending
    };
    let agreed = |category: Category, voters: &[&Annotation]| {
        let s: Vec<i8> = voters.iter().filter_map(|a| a.sentiment).collect();
        ResolvedLabel {
            tweet_id,
            status: Status::Agreed,
            category: Some(category),
            sentiment: if category == Category::Signal { combine_sentiments(&s) } else { None },
        }
    };
    match ratings {
        [] | [_] => pending,
        [a, b] if a.category == b.category => agreed(a.category, &[a, b]),
        [_, _] if third_rater => pending,
        [_, _] => disagreed,
        [a, b, c, ..] => {
            for cat in Category::ALL {
                let voters: Vec<&Annotation> = [a, b, c].into_iter().filter(|r| r.category == cat).collect();
                if voters.len() >= 2 {
                    return agreed(cat, &voters);
                }
            }
            disagreed
        }
    }
}
