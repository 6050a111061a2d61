//! Descriptive outputs over the labeled signal corpus: drug mentions per
//! 60-day bin, drug/effect pairs by unique user, and binned sentiment sums.
//!
//! Every aggregation walks the corpus in (date, tweet id) order, so "first
//! tweet of a user" is well defined and results do not depend on input order.

mod lexicon;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use chrono::{Days, NaiveDate};
use log::warn;
use serde::Serialize;

use crate::ingest::{tokenize, LexemeList, TweetRecord};
use crate::labels::{Category, LabeledTweet};
use crate::{Error, Result};

pub use lexicon::{read_effect_tags, DrugLexicon, EffectVocabulary, DEFAULT_DRUGS, DEFAULT_EFFECTS, NO_EFFECT};

/// Drugs plotted separately; the rest are summed under [`OTHER`].
pub const TOP_DRUGS: usize = 7;
pub const OTHER: &str = "Other";
/// Drug/effect pairs reported by fewer users are suppressed.
pub const MIN_PAIR_USERS: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimeBins {
    pub origin: NaiveDate,
    pub width_days: u32,
    /// Last date inside the study window.
    pub end: NaiveDate,
}

impl Default for TimeBins {
    fn default() -> Self {
        TimeBins {
            origin: NaiveDate::from_ymd_opt(2010, 9, 9).unwrap(),
            width_days: 60,
            end: NaiveDate::from_ymd_opt(2013, 8, 28).unwrap(),
        }
    }
}

impl TimeBins {
    pub fn validate(&self) -> Result<()> {
        if self.width_days == 0 {
            return Err(Error::invalid("bin width must be positive"));
        }
        if self.end < self.origin {
            return Err(Error::invalid("study window ends before it starts"));
        }
        Ok(())
    }

    pub fn bin(&self, date: NaiveDate) -> Option<usize> {
        if date < self.origin || date > self.end {
            return None;
        }
        let days = (date - self.origin).num_days() as usize;
        Some(days / self.width_days as usize)
    }

    pub fn len(&self) -> usize {
        self.bin(self.end).map_or(0, |b| b + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self, bin: usize) -> NaiveDate {
        self.origin + Days::new(bin as u64 * u64::from(self.width_days))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Filters {
    pub exclude_retweets: bool,
    pub require_side_effects: bool,
    /// Count each user once (per drug for mention series), in the bin of
    /// their first qualifying tweet.
    pub unique_users_only: bool,
}

impl Filters {
    /// All eight combinations.
    pub fn all() -> Vec<Filters> {
        (0..8)
            .map(|m| Filters {
                exclude_retweets: m & 1 != 0,
                require_side_effects: m & 2 != 0,
                unique_users_only: m & 4 != 0,
            })
            .collect()
    }
}

/// A leading `rt` token, or the record's own retweet flag.
pub fn is_retweet(rec: &TweetRecord, lex: &LexemeList) -> bool {
    rec.retweet == Some(true) || lex.tokens.first().is_some_and(|t| t == "rt")
}

#[derive(Debug, Clone)]
pub struct StudyTweet {
    pub record: TweetRecord,
    pub lexemes: LexemeList,
    pub sentiment: Option<i8>,
    pub effects: BTreeSet<String>,
    pub retweet: bool,
}

impl StudyTweet {
    pub fn new(record: TweetRecord, sentiment: Option<i8>, effects: BTreeSet<String>) -> Self {
        let lexemes = tokenize(&record.text);
        let retweet = is_retweet(&record, &lexemes);
        StudyTweet {
            record,
            lexemes,
            sentiment,
            effects,
            retweet,
        }
    }

    /// At least one effect tag other than "none".
    pub fn reports_effect(&self) -> bool {
        self.effects.iter().any(|e| e != NO_EFFECT)
    }

    fn passes(&self, f: &Filters) -> bool {
        !(f.exclude_retweets && self.retweet) && !(f.require_side_effects && !self.reports_effect())
    }
}

/// The signal tweets of a labeled corpus with their effect tags, in
/// (date, tweet id) order.
#[derive(Debug, Clone, Default)]
pub struct StudyCorpus {
    tweets: Vec<StudyTweet>,
}

impl StudyCorpus {
    pub fn new(mut tweets: Vec<StudyTweet>) -> Self {
        tweets.sort_by_key(|t| (t.record.date, t.record.tweet_id));
        StudyCorpus { tweets }
    }

    pub fn from_labeled(rows: &[LabeledTweet], effects: &BTreeMap<u64, BTreeSet<String>>) -> Self {
        Self::new(
            rows.iter()
                .filter(|r| r.category == Category::Signal)
                .map(|r| {
                    let tags = effects.get(&r.record.tweet_id).cloned().unwrap_or_default();
                    StudyTweet::new(r.record.clone(), r.sentiment, tags)
                })
                .collect(),
        )
    }

    pub fn tweets(&self) -> &[StudyTweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionSeries {
    pub bins: TimeBins,
    /// Per drug, one count per bin.
    pub counts: BTreeMap<String, Vec<u64>>,
    pub skipped_out_of_window: usize,
}

impl MentionSeries {
    pub fn totals(&self) -> Vec<u64> {
        let mut out = vec![0; self.bins.len()];
        for row in self.counts.values() {
            for (o, c) in out.iter_mut().zip(row) {
                *o += c;
            }
        }
        out
    }

    /// The most mentioned drugs in descending order (ties by name), then
    /// the rest summed under [`OTHER`].
    pub fn grouped(&self, top: usize) -> Vec<(String, Vec<u64>)> {
        let mut ranked: Vec<(&String, &Vec<u64>)> = self.counts.iter().collect();
        ranked.sort_by(|a, b| {
            let (ta, tb) = (a.1.iter().sum::<u64>(), b.1.iter().sum::<u64>());
            tb.cmp(&ta).then_with(|| a.0.cmp(b.0))
        });
        let mut out: Vec<(String, Vec<u64>)> = ranked
            .iter()
            .take(top)
            .map(|(d, c)| (d.to_string(), c.to_vec()))
            .collect();
        if ranked.len() > top {
            let mut other = vec![0; self.bins.len()];
            for (_, c) in &ranked[top..] {
                for (o, v) in other.iter_mut().zip(c.iter()) {
                    *o += v;
                }
            }
            out.push((OTHER.to_string(), other));
        }
        out
    }

    /// `drug,bin_start,count`, top drugs plus Other, every bin.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["drug", "bin_start", "count"])?;
        for (drug, counts) in self.grouped(TOP_DRUGS) {
            for (b, c) in counts.iter().enumerate() {
                w.write_record([drug.clone(), self.bins.start(b).to_string(), c.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn skip_out_of_window(t: &StudyTweet) {
    warn!("tweet {} dated {} is outside the study window", t.record.tweet_id, t.record.date);
}

/// Per-drug mention counts per bin. A tweet naming k drugs adds one to
/// each of the k rows.
pub fn drug_mention_series(corpus: &StudyCorpus, lexicon: &DrugLexicon, bins: &TimeBins, filters: &Filters) -> MentionSeries {
    let mut counts: BTreeMap<String, Vec<u64>> = lexicon.names().map(|d| (d.to_string(), vec![0; bins.len()])).collect();
    let mut seen: BTreeSet<(u64, &str)> = BTreeSet::new();
    let mut skipped = 0;
    for t in corpus.tweets().iter().filter(|t| t.passes(filters)) {
        let Some(bin) = bins.bin(t.record.date) else {
            skip_out_of_window(t);
            skipped += 1;
            continue;
        };
        for drug in lexicon.mentions(&t.lexemes) {
            if filters.unique_users_only && !seen.insert((t.record.user_id, drug)) {
                continue;
            }
            counts.get_mut(drug).expect("lexicon drug")[bin] += 1;
        }
    }
    MentionSeries {
        bins: *bins,
        counts,
        skipped_out_of_window: skipped,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRow {
    pub drug: String,
    pub effect: String,
    pub users: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DrugEffectTable {
    /// Ordered by drug, then descending users, then effect.
    pub rows: Vec<PairRow>,
    /// Tweets mentioning each drug.
    pub drug_totals: BTreeMap<String, u64>,
}

impl DrugEffectTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["drug", "effect", "users"])?;
        for r in &self.rows {
            w.write_record([r.drug.as_str(), r.effect.as_str(), &r.users.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_totals_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["drug", "mentions"])?;
        for (d, n) in &self.drug_totals {
            w.write_record([d.as_str(), &n.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Drug/effect co-mentions counted once per user, kept at
/// [`MIN_PAIR_USERS`] users or more.
pub fn side_effect_pairs(corpus: &StudyCorpus, lexicon: &DrugLexicon) -> DrugEffectTable {
    let mut users: BTreeMap<(&str, &str), BTreeSet<u64>> = BTreeMap::new();
    let mut drug_totals: BTreeMap<String, u64> = lexicon.names().map(|d| (d.to_string(), 0)).collect();
    for t in corpus.tweets() {
        for drug in lexicon.mentions(&t.lexemes) {
            *drug_totals.get_mut(drug).expect("lexicon drug") += 1;
            for effect in &t.effects {
                users.entry((drug, effect)).or_default().insert(t.record.user_id);
            }
        }
    }
    let mut rows: Vec<PairRow> = users
        .into_iter()
        .filter(|(_, u)| u.len() as u64 >= MIN_PAIR_USERS)
        .map(|((drug, effect), u)| PairRow {
            drug: drug.to_string(),
            effect: effect.to_string(),
            users: u.len() as u64,
        })
        .collect();
    rows.sort_by(|a, b| a.drug.cmp(&b.drug).then(b.users.cmp(&a.users)).then_with(|| a.effect.cmp(&b.effect)));
    DrugEffectTable { rows, drug_totals }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SentimentBin {
    pub bin_start: NaiveDate,
    /// Sum of the tweets' sentiments.
    pub psi: i64,
    pub n: u64,
}

impl SentimentBin {
    /// One unit of rating uncertainty per tweet, added in quadrature.
    pub fn sigma(&self) -> f64 {
        (self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentimentSeries {
    pub bins: Vec<SentimentBin>,
    pub skipped_unresolved: usize,
    pub skipped_out_of_window: usize,
}

impl SentimentSeries {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_start", "psi", "n", "sigma"])?;
        for b in &self.bins {
            w.write_record([b.bin_start.to_string(), b.psi.to_string(), b.n.to_string(), b.sigma().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-bin sentiment sums, optionally restricted to tweets naming one drug.
pub fn sentiment_series(
    corpus: &StudyCorpus,
    bins: &TimeBins,
    filters: &Filters,
    drug: Option<(&DrugLexicon, &str)>,
) -> Result<SentimentSeries> {
    if let Some((lexicon, name)) = drug {
        if !lexicon.contains(name) {
            return Err(Error::invalid(format!("unknown drug `{name}`")));
        }
    }
    let mut out: Vec<SentimentBin> = (0..bins.len())
        .map(|b| SentimentBin {
            bin_start: bins.start(b),
            psi: 0,
            n: 0,
        })
        .collect();
    let mut seen = BTreeSet::new();
    let (mut unresolved, mut outside) = (0, 0);
    for t in corpus.tweets().iter().filter(|t| t.passes(filters)) {
        if let Some((lexicon, name)) = drug {
            if !lexicon.mentions(&t.lexemes).contains(&name) {
                continue;
            }
        }
        let Some(bin) = bins.bin(t.record.date) else {
            skip_out_of_window(t);
            outside += 1;
            continue;
        };
        let Some(s) = t.sentiment else {
            unresolved += 1;
            continue;
        };
        if filters.unique_users_only && !seen.insert(t.record.user_id) {
            continue;
        }
        out[bin].psi += i64::from(s);
        out[bin].n += 1;
    }
    if unresolved > 0 {
        warn!("{unresolved} tweets without a resolved sentiment were skipped");
    }
    Ok(SentimentSeries {
        bins: out,
        skipped_unresolved: unresolved,
        skipped_out_of_window: outside,
    })
}

/// Pearson correlation between per-bin Ψ and per-bin mention totals over the
/// bins holding at least one rated tweet.
pub fn sentiment_drug_correlation(series: &SentimentSeries, mentions: &[u64]) -> Result<f64> {
    if series.bins.len() != mentions.len() {
        return Err(Error::invalid(format!(
            "sentiment series has {} bins but mention totals have {}",
            series.bins.len(),
            mentions.len()
        )));
    }
    let pairs: Vec<(f64, f64)> = series
        .bins
        .iter()
        .zip(mentions)
        .filter(|(b, _)| b.n > 0)
        .map(|(b, &m)| (b.psi as f64, m as f64))
        .collect();
    if pairs.len() < 3 {
        return Err(Error::domain(format!("correlation needs 3 populated bins, found {}", pairs.len())));
    }
    pearson(&pairs)
}

pub fn pearson(pairs: &[(f64, f64)]) -> Result<f64> {
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("correlation is undefined: a series has zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeutralityRow {
    pub bin_start: NaiveDate,
    pub z: f64,
    /// |z| ≤ 1: compatible with zero sentiment within one σ.
    pub compatible: bool,
}

/// z = Ψ/√N for each bin with N > 0.
pub fn neutrality_test(series: &SentimentSeries) -> Vec<NeutralityRow> {
    series
        .bins
        .iter()
        .filter(|b| b.n > 0)
        .map(|b| {
            let z = b.psi as f64 / b.sigma();
            NeutralityRow {
                bin_start: b.bin_start,
                z,
                compatible: z.abs() <= 1.0,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn tweet(id: u64, user: u64, date: NaiveDate, text: &str, s: Option<i8>, effects: &[&str]) -> StudyTweet {
        StudyTweet::new(
            TweetRecord {
                tweet_id: id,
                user_id: user,
                date,
                text: text.into(),
                user_lang: "en".into(),
                retweet: None,
            },
            s,
            effects.iter().map(|e| e.to_string()).collect(),
        )
    }

    #[test]
    fn bins() {
        let b = TimeBins::default();
        assert_eq!(b.bin(d(2010, 9, 9)), Some(0));
        assert_eq!(b.bin(d(2010, 11, 7)), Some(0));
        assert_eq!(b.bin(d(2010, 11, 8)), Some(1));
        assert_eq!(b.bin(d(2010, 9, 8)), None);
        assert_eq!(b.bin(d(2013, 8, 29)), None);
        assert_eq!(b.len(), 19);
        assert_eq!(b.start(1), d(2010, 11, 8));
    }

    #[test]
    fn single_mention() {
        let c = StudyCorpus::new(vec![tweet(1, 1, d(2010, 9, 9), "atripla dreams", None, &[])]);
        let s = drug_mention_series(&c, &DrugLexicon::bundled(), &TimeBins::default(), &Filters::default());
        assert_eq!(s.counts["Atripla"][0], 1);
        assert_eq!(s.totals().iter().sum::<u64>(), 1);
    }

    #[test]
    fn retweets_and_effects_filter() {
        let c = StudyCorpus::new(vec![
            tweet(1, 1, d(2011, 1, 1), "RT @x: my atripla", None, &["nausea"]),
            tweet(2, 2, d(2011, 1, 1), "my truvada", None, &["none"]),
            tweet(3, 3, d(2009, 1, 1), "old truvada", None, &[]),
        ]);
        let lex = DrugLexicon::bundled();
        let bins = TimeBins::default();
        let f = Filters {
            exclude_retweets: true,
            ..Filters::default()
        };
        let s = drug_mention_series(&c, &lex, &bins, &f);
        assert_eq!(s.counts["Atripla"].iter().sum::<u64>(), 0);
        assert_eq!(s.counts["Truvada"].iter().sum::<u64>(), 1);
        assert_eq!(s.skipped_out_of_window, 1);
        let f = Filters {
            require_side_effects: true,
            ..Filters::default()
        };
        let s = drug_mention_series(&c, &lex, &bins, &f);
        assert_eq!(s.counts["Atripla"].iter().sum::<u64>(), 1);
        assert_eq!(s.counts["Truvada"].iter().sum::<u64>(), 0);
    }

    #[test]
    fn unique_users_anchor_to_first_tweet() {
        let c = StudyCorpus::new(vec![
            tweet(2, 1, d(2012, 1, 1), "atripla again", None, &[]),
            tweet(1, 1, d(2011, 1, 1), "atripla", None, &[]),
            tweet(3, 1, d(2012, 1, 1), "truvada", None, &[]),
        ]);
        let bins = TimeBins::default();
        let f = Filters {
            unique_users_only: true,
            ..Filters::default()
        };
        let s = drug_mention_series(&c, &DrugLexicon::bundled(), &bins, &f);
        assert_eq!(s.counts["Atripla"].iter().sum::<u64>(), 1);
        assert_eq!(s.counts["Atripla"][bins.bin(d(2011, 1, 1)).unwrap()], 1);
        assert_eq!(s.counts["Truvada"].iter().sum::<u64>(), 1);
    }

    #[test]
    fn grouping_keeps_seven_and_other() {
        let lex = DrugLexicon::bundled();
        let names: Vec<&str> = lex.names().collect();
        let tweets = names
            .iter()
            .enumerate()
            .flat_map(|(i, n)| (0..=i).map(move |k| tweet((i * 100 + k) as u64, 1, d(2011, 1, 1), n, None, &[])))
            .collect();
        let s = drug_mention_series(&StudyCorpus::new(tweets), &lex, &TimeBins::default(), &Filters::default());
        let g = s.grouped(TOP_DRUGS);
        assert_eq!(g.len(), 8);
        assert_eq!(g[0].0, *names.last().unwrap());
        assert_eq!(g[7].0, OTHER);
        let total: u64 = g.iter().flat_map(|(_, c)| c).sum();
        assert_eq!(total, s.totals().iter().sum::<u64>());
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 8 * 19);
    }

    #[test]
    fn pairs_dedup_per_user_and_threshold() {
        let lex = DrugLexicon::bundled();
        let mut tweets = Vec::new();
        for user in 0..3 {
            for k in 0..2 {
                tweets.push(tweet(user * 10 + k, user, d(2011, 1, 1), "atripla", None, &["nightmares"]));
            }
        }
        for user in 0..2 {
            tweets.push(tweet(100 + user, user, d(2011, 1, 1), "truvada", None, &["nausea"]));
        }
        let t = side_effect_pairs(&StudyCorpus::new(tweets), &lex);
        assert_eq!(
            t.rows,
            vec![PairRow {
                drug: "Atripla".into(),
                effect: "nightmares".into(),
                users: 3
            }]
        );
        assert_eq!(t.drug_totals["Atripla"], 6);
        assert_eq!(t.drug_totals["Truvada"], 2);
    }

    #[test]
    fn sentiment_sums() {
        let c = StudyCorpus::new(vec![
            tweet(1, 1, d(2011, 1, 1), "atripla", Some(-3), &[]),
            tweet(2, 2, d(2011, 1, 2), "truvada", Some(1), &[]),
            tweet(3, 3, d(2011, 1, 2), "truvada", None, &[]),
        ]);
        let bins = TimeBins::default();
        let s = sentiment_series(&c, &bins, &Filters::default(), None).unwrap();
        let b = s.bins[bins.bin(d(2011, 1, 1)).unwrap()];
        assert_eq!((b.psi, b.n), (-2, 2));
        assert_eq!(b.sigma(), 2f64.sqrt());
        assert_eq!(s.skipped_unresolved, 1);
        assert_eq!(s.bins[0], SentimentBin { bin_start: bins.origin, psi: 0, n: 0 });
        let lex = DrugLexicon::bundled();
        let only = sentiment_series(&c, &bins, &Filters::default(), Some((&lex, "Truvada"))).unwrap();
        assert_eq!(only.bins.iter().map(|b| b.psi).sum::<i64>(), 1);
        assert!(sentiment_series(&c, &bins, &Filters::default(), Some((&lex, "Aspirin"))).is_err());
    }

    #[test]
    fn neutrality() {
        let s = SentimentSeries {
            bins: vec![
                SentimentBin { bin_start: d(2011, 1, 1), psi: 0, n: 4 },
                SentimentBin { bin_start: d(2011, 3, 1), psi: -10, n: 25 },
                SentimentBin { bin_start: d(2011, 5, 1), psi: 0, n: 0 },
            ],
            skipped_unresolved: 0,
            skipped_out_of_window: 0,
        };
        let rows = neutrality_test(&s);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].z, rows[0].compatible), (0.0, true));
        assert_eq!((rows[1].z, rows[1].compatible), (-2.0, false));
    }

    fn series(psi: &[i64]) -> SentimentSeries {
        SentimentSeries {
            bins: psi
                .iter()
                .enumerate()
                .map(|(i, &p)| SentimentBin { bin_start: TimeBins::default().start(i), psi: p, n: 1 })
                .collect(),
            skipped_unresolved: 0,
            skipped_out_of_window: 0,
        }
    }

    #[test]
    fn correlation_cases() {
        assert!(sentiment_drug_correlation(&series(&[1, 2, 3]), &[5, 5, 5]).is_err());
        assert!(sentiment_drug_correlation(&series(&[1, 2]), &[1, 2]).is_err());
        let r = sentiment_drug_correlation(&series(&[2, 4, 6, 10]), &[1, 2, 3, 5]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        let r = sentiment_drug_correlation(&series(&[-2, -4, -6]), &[1, 2, 3]).unwrap();
        assert!((r + 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn pearson_is_bounded_and_symmetric(v in prop::collection::vec((-50i32..50, -50i32..50), 3..30)) {
            let pairs: Vec<(f64, f64)> = v.iter().map(|&(a, b)| (a as f64, b as f64)).collect();
            let swapped: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| (b, a)).collect();
            if let Ok(r) = pearson(&pairs) {
                prop_assert!((-1.0..=1.0).contains(&r));
                prop_assert!((r - pearson(&swapped).unwrap()).abs() < 1e-12);
            }
        }
    }
}
