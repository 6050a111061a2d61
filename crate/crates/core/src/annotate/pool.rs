use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use super::log::{log_len, AnnotationLog, Snapshot};
use super::{resolve, Annotation, ResolvedLabel, Status, SENTIMENT_MAX, SENTIMENT_MIN};
use crate::ingest::TweetRecord;
use crate::labels::{Category, LabeledTweet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PoolConfig {
    /// Send tweets whose two ratings disagree to a third rater.
    pub requeue_disagreements: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SubmitError {
    #[error("unknown rater `{0}`")]
    UnknownRater(String),
    #[error("unknown tweet {0}")]
    UnknownTweet(u64),
    #[error("rater `{rater}` already rated tweet {tweet_id}")]
    Duplicate { tweet_id: u64, rater: String },
    #[error("tweet {tweet_id} was not served to rater `{rater}`")]
    NotServed { tweet_id: u64, rater: String },
    #[error("tweet {0} already has all its ratings")]
    Full(u64),
    #[error("sentiment {0} is outside [-5, 5]")]
    SentimentRange(i64),
    #[error("sentiment is only rated on signal tweets")]
    SentimentNotSignal,
    #[error("could not store the annotation: {0}")]
    Storage(String),
}

impl SubmitError {
    /// The rating already exists or cannot be added any more.
    pub fn is_conflict(&self) -> bool {
        matches!(self, SubmitError::Duplicate { .. } | SubmitError::Full(_))
    }
}

impl From<SubmitError> for Error {
    fn from(e: SubmitError) -> Self {
        Error::invalid(e.to_string())
    }
}

/// Checks a raw sentiment value against the rating scale.
pub fn check_sentiment(value: i64) -> std::result::Result<i8, SubmitError> {
    if (i64::from(SENTIMENT_MIN)..=i64::from(SENTIMENT_MAX)).contains(&value) {
        Ok(value as i8)
    } else {
        Err(SubmitError::SentimentRange(value))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoolStats {
    pub total: usize,
    pub annotations: usize,
    /// Tweets with at least one rating.
    pub rated: usize,
    pub doubly_rated: usize,
    pub agreed: usize,
    pub disagreed: usize,
    pub agreement_rate: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Pool {
    config: PoolConfig,
    tasks: BTreeMap<u64, TweetRecord>,
    raters: BTreeSet<String>,
    ratings: BTreeMap<u64, Vec<Annotation>>,
    /// Served and not yet rated.
    leases: BTreeMap<u64, BTreeSet<String>>,
    history: Vec<Annotation>,
}

impl Pool {
    pub fn new<I, S>(tasks: Vec<TweetRecord>, raters: I, config: PoolConfig) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for t in tasks {
            let id = t.tweet_id;
            if map.insert(id, t).is_some() {
                return Err(Error::invalid(format!("tweet {id} listed twice in the task pool")));
            }
        }
        Ok(Pool {
            config,
            tasks: map,
            raters: raters.into_iter().map(Into::into).collect(),
            ratings: BTreeMap::new(),
            leases: BTreeMap::new(),
            history: Vec::new(),
        })
    }

    pub fn config(&self) -> PoolConfig {
        self.config
    }

    pub fn register_rater(&mut self, rater: impl Into<String>) {
        self.raters.insert(rater.into());
    }

    pub fn is_rater(&self, rater: &str) -> bool {
        self.raters.contains(rater)
    }

    pub fn history(&self) -> &[Annotation] {
        &self.history
    }

    pub fn ratings(&self, tweet_id: u64) -> &[Annotation] {
        self.ratings.get(&tweet_id).map_or(&[], Vec::as_slice)
    }

    fn capacity(&self, tweet_id: u64) -> usize {
        let r = self.ratings(tweet_id);
        if self.config.requeue_disagreements && r.len() >= 2 && r[0].category != r[1].category {
            3
        } else {
            2
        }
    }

    fn served_to(&self, tweet_id: u64, rater: &str) -> bool {
        self.ratings(tweet_id).iter().any(|a| a.rater == rater)
            || self.leases.get(&tweet_id).is_some_and(|l| l.contains(rater))
    }

    fn claimed(&self, tweet_id: u64) -> usize {
        self.ratings(tweet_id).len() + self.leases.get(&tweet_id).map_or(0, BTreeSet::len)
    }

    /// Next tweet for the rater: one already rated by someone else first,
    /// then an unrated one, lowest id within each group. The tweet is leased
    /// to the rater and never offered to them again.
    pub fn next_task(&mut self, rater: &str) -> std::result::Result<Option<TweetRecord>, SubmitError> {
        if !self.is_rater(rater) {
            return Err(SubmitError::UnknownRater(rater.to_string()));
        }
        let pick = self
            .tasks
            .keys()
            .filter(|&&id| !self.served_to(id, rater) && self.claimed(id) < self.capacity(id))
            .min_by_key(|&&id| (self.ratings(id).is_empty(), id))
            .copied();
        Ok(pick.map(|id| {
            self.leases.entry(id).or_default().insert(rater.to_string());
            self.tasks[&id].clone()
        }))
    }

    /// Validates an annotation without storing it.
    pub fn check(&self, a: &Annotation, require_lease: bool) -> std::result::Result<(), SubmitError> {
        if !self.is_rater(&a.rater) {
            return Err(SubmitError::UnknownRater(a.rater.clone()));
        }
        if !self.tasks.contains_key(&a.tweet_id) {
            return Err(SubmitError::UnknownTweet(a.tweet_id));
        }
        if let Some(s) = a.sentiment {
            check_sentiment(i64::from(s))?;
            if a.category != Category::Signal {
                return Err(SubmitError::SentimentNotSignal);
            }
        }
        if self.ratings(a.tweet_id).iter().any(|r| r.rater == a.rater) {
            return Err(SubmitError::Duplicate {
                tweet_id: a.tweet_id,
                rater: a.rater.clone(),
            });
        }
        let leased = self.leases.get(&a.tweet_id).is_some_and(|l| l.contains(&a.rater));
        if require_lease && !leased {
            return Err(SubmitError::NotServed {
                tweet_id: a.tweet_id,
                rater: a.rater.clone(),
            });
        }
        if !leased && self.ratings(a.tweet_id).len() >= self.capacity(a.tweet_id) {
            return Err(SubmitError::Full(a.tweet_id));
        }
        Ok(())
    }

    /// Stores a checked annotation and returns the tweet's new resolution.
    fn commit(&mut self, a: Annotation) -> ResolvedLabel {
        let id = a.tweet_id;
        if let Some(l) = self.leases.get_mut(&id) {
            l.remove(&a.rater);
            if l.is_empty() {
                self.leases.remove(&id);
            }
        }
        self.history.push(a.clone());
        self.ratings.entry(id).or_default().push(a);
        self.resolution(id)
    }

    pub fn submit(&mut self, a: Annotation) -> std::result::Result<ResolvedLabel, SubmitError> {
        self.check(&a, true)?;
        Ok(self.commit(a))
    }

    /// Re-applies logged annotations; leases are not required.
    pub fn replay<I: IntoIterator<Item = Annotation>>(&mut self, annotations: I) -> Result<()> {
        for a in annotations {
            self.check(&a, false)?;
            self.commit(a);
        }
        Ok(())
    }

    pub fn resolution(&self, tweet_id: u64) -> ResolvedLabel {
        resolve(tweet_id, self.ratings(tweet_id), self.config.requeue_disagreements)
    }

    /// Share of doubly rated tweets whose first two ratings agree.
    pub fn agreement_rate(&self) -> Result<f64> {
        let (agree, doubly) = self.agreement_counts();
        if doubly == 0 {
            return Err(Error::domain("no tweet has two ratings yet"));
        }
        Ok(agree as f64 / doubly as f64)
    }

    fn agreement_counts(&self) -> (usize, usize) {
        let doubly: Vec<&Vec<Annotation>> = self.ratings.values().filter(|r| r.len() >= 2).collect();
        let agree = doubly.iter().filter(|r| r[0].category == r[1].category).count();
        (agree, doubly.len())
    }

    pub fn stats(&self) -> PoolStats {
        let (_, doubly) = self.agreement_counts();
        let mut agreed = 0;
        let mut disagreed = 0;
        for &id in self.ratings.keys() {
            match self.resolution(id).status {
                Status::Agreed => agreed += 1,
                Status::Disagreed => disagreed += 1,
                Status::Pending => {}
            }
        }
        PoolStats {
            total: self.tasks.len(),
            annotations: self.history.len(),
            rated: self.ratings.len(),
            doubly_rated: doubly,
            agreed,
            disagreed,
            agreement_rate: self.agreement_rate().ok(),
        }
    }

    /// Agreed tweets with their resolved labels, ordered by tweet id.
    pub fn export_labels(&self) -> Vec<LabeledTweet> {
        self.ratings
            .keys()
            .filter_map(|&id| {
                let r = self.resolution(id);
                (r.status == Status::Agreed).then(|| LabeledTweet {
                    record: self.tasks[&id].clone(),
                    category: r.category.expect("agreed labels carry a category"),
                    sentiment: r.sentiment,
                })
            })
            .collect()
    }
}

/// A pool backed by a durable log: every accepted annotation is synced to
/// disk before it becomes visible.
#[derive(Debug)]
pub struct AnnotationService {
    pool: Pool,
    log: Option<AnnotationLog>,
}

impl AnnotationService {
    pub fn in_memory(pool: Pool) -> Self {
        AnnotationService { pool, log: None }
    }

    /// Rebuilds the pool from an optional snapshot and the log, then keeps
    /// appending to the log.
    pub fn open(mut pool: Pool, log_path: &Path, snapshot: Option<&Path>) -> Result<Self> {
        pool.replay(Snapshot::recover(snapshot, log_path)?)?;
        Ok(AnnotationService {
            pool,
            log: Some(AnnotationLog::open(log_path)?),
        })
    }

    pub fn pool(&self) -> &Pool {
        &self.pool
    }

    pub fn register_rater(&mut self, rater: impl Into<String>) {
        self.pool.register_rater(rater);
    }

    pub fn next_task(&mut self, rater: &str) -> std::result::Result<Option<TweetRecord>, SubmitError> {
        self.pool.next_task(rater)
    }

    pub fn submit(&mut self, a: Annotation) -> std::result::Result<ResolvedLabel, SubmitError> {
        self.pool.check(&a, true)?;
        if let Some(log) = &mut self.log {
            log.append(&a).map_err(|e| SubmitError::Storage(e.to_string()))?;
        }
        Ok(self.pool.commit(a))
    }

    /// Writes a compacted snapshot covering the current log.
    pub fn snapshot(&self, path: &Path) -> Result<()> {
        let entries = match &self.log {
            Some(log) => log_len(log.path())?,
            None => self.pool.history().len(),
        };
        Snapshot {
            log_entries: entries,
            annotations: self.pool.history().to_vec(),
        }
        .write(path)
    }
}
