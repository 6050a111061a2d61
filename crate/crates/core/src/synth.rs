//! Deterministic synthetic data: a templated tweet corpus with ground truth,
//! simulated two-rater annotation, and feature-level two-class samples.
//!
//! Everything here is driven by a ChaCha8 stream seeded by the caller, so the
//! same seed always yields the same bytes.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Days, NaiveDate, TimeDelta, Utc};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Normal, Poisson};

use crate::annotate::{Annotation, Pool};
use crate::classifier::Example;
use crate::cleanse::{apply_rules, default_rules};
use crate::features::{Feature, FeatureVector};
use crate::ingest::TweetRecord;
use crate::labels::Category;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub tweets: usize,
    pub signal_share: f64,
    pub foreign_share: f64,
    /// Accounts posting signal tweets; few enough that users repeat.
    pub signal_users: u64,
    pub noise_users: u64,
    pub retweet_share: f64,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            tweets: 1000,
            signal_share: 0.3,
            foreign_share: 0.12,
            signal_users: 80,
            noise_users: 300,
            retweet_share: 0.1,
            start: NaiveDate::from_ymd_opt(2010, 9, 9).unwrap(),
            end: NaiveDate::from_ymd_opt(2013, 8, 28).unwrap(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthCorpus {
    pub tweets: Vec<TweetRecord>,
    pub truth: BTreeMap<u64, Category>,
    /// True sentiment of every signal tweet.
    pub sentiments: BTreeMap<u64, i8>,
    /// True effect tags of every signal tweet.
    pub effects: BTreeMap<u64, BTreeSet<String>>,
}

const DRUGS: [(&str, u32); 12] = [
    ("Atripla", 30),
    ("Truvada", 18),
    ("Complera", 10),
    ("Stribild", 8),
    ("Sustiva", 7),
    ("Isentress", 6),
    ("Norvir", 5),
    ("Prezista", 5),
    ("Reyataz", 4),
    ("Viread", 3),
    ("Epivir", 2),
    ("Kaletra", 2),
];

/// (tag, phrase, typical sentiment)
const EFFECTS: [(&str, &str, i8); 9] = [
    ("nightmares", "nightmares", -3),
    ("vivid dreams", "crazy vivid dreams", -1),
    ("insomnia", "insomnia", -2),
    ("nausea", "nausea", -3),
    ("headache", "a headache", -2),
    ("fatigue", "fatigue", -2),
    ("dizziness", "dizzy spells", -2),
    ("high/psychoactive", "that high feeling", 0),
    ("none", "", 2),
];

const SIGNAL_EFFECT_TEMPLATES: [&str; 6] = [
    "i started {drug} last week and i have {effect} every night",
    "my {drug} gives me {effect}, i hate this",
    "took my {drug} at midnight and now {effect} again ugh",
    "i think my new meds {drug} cause {effect} but my doctor says wait",
    "been on {drug} a month, still dealing with {effect}",
    "anyone else get {effect} from {drug}? it's my first month",
];

const SIGNAL_PLAIN_TEMPLATES: [&str; 5] = [
    "i've been on {drug} for two years and i feel great",
    "my doctor switched me to {drug} today, wish me luck",
    "just picked up my {drug} refill, i am so tired of pills",
    "i take my {drug} every night before bed and i'm fine",
    "so happy my viral load is undetectable since i started {drug}",
];

const NOISE_TEMPLATES: [&str; 10] = [
    "study shows {drug} reduces transmission risk in large trial",
    "fda approves {drug} for prevention in high risk adults",
    "{drug} price increase sparks protest by activists",
    "researchers compare {drug} with {drug2} in new study",
    "cheap {drug} online pharmacy without prescription",
    "report: {drug} sales rise in third quarter",
    "health officials recommend {drug} as first line therapy",
    "generic {drug} approved for distribution in several countries",
    "breaking news {drug} trial results published today",
    "{drug} maker announces new pricing program http://t.co/x1y2",
];

const FOREIGN_TEMPLATES: [&str; 8] = [
    "el tratamiento con {drug} es muy caro para los pacientes y sus familias",
    "o tratamento com {drug} foi aprovado pelo governo para todos os pacientes",
    "le traitement {drug} est maintenant disponible dans les pharmacies de la ville",
    "il farmaco {drug} non è ancora disponibile per tutti i pazienti",
    "das medikament {drug} ist jetzt auch in der apotheke für alle patienten",
    "het medicijn {drug} is nu ook beschikbaar voor alle patiënten in het land",
    "jag har tagit {drug} i ett år och det är bra för mig",
    "лечение {drug} теперь доступно для всех пациентов в россии",
];

fn weighted_drug(rng: &mut ChaCha8Rng) -> &'static str {
    DRUGS.choose_weighted(rng, |d| d.1).expect("non-empty").0
}

fn fill(template: &str, drug: &str, drug2: &str, effect: &str) -> String {
    template.replace("{drug}", drug).replace("{drug2}", drug2).replace("{effect}", effect)
}

fn random_date(rng: &mut ChaCha8Rng, start: NaiveDate, end: NaiveDate) -> NaiveDate {
    let span = (end - start).num_days().max(0) as u64;
    start + Days::new(rng.random_range(0..=span))
}

/// Clamped perturbation of a typical sentiment.
fn jitter(rng: &mut ChaCha8Rng, base: i8, spread: i8) -> i8 {
    (base + rng.random_range(-spread..=spread)).clamp(-5, 5)
}

pub fn generate_corpus(cfg: &CorpusConfig, seed: u64) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SynthCorpus::default();
    for i in 0..cfg.tweets {
        let tweet_id = 100_000 + i as u64;
        let date = random_date(&mut rng, cfg.start, cfg.end);
        let drug = weighted_drug(&mut rng);
        let u: f64 = rng.random();
        let (category, user_id, user_lang, text) = if u < cfg.signal_share {
            let user = rng.random_range(0..cfg.signal_users);
            let (tag, phrase, base) = *EFFECTS.choose(&mut rng).expect("non-empty");
            let text = if tag == "none" {
                fill(SIGNAL_PLAIN_TEMPLATES.choose(&mut rng).unwrap(), drug, "", "")
            } else {
                fill(SIGNAL_EFFECT_TEMPLATES.choose(&mut rng).unwrap(), drug, "", phrase)
            };
            let text = if rng.random_bool(cfg.retweet_share) {
                format!("RT @friend{}: {text}", rng.random_range(0..50))
            } else {
                text
            };
            out.sentiments.insert(tweet_id, jitter(&mut rng, base, 1));
            out.effects.insert(tweet_id, BTreeSet::from([tag.to_string()]));
            (Category::Signal, user, "en", text)
        } else if u < cfg.signal_share + cfg.foreign_share {
            let user = cfg.signal_users + cfg.noise_users + rng.random_range(0..cfg.noise_users);
            // most foreign posters declare English, so the account rule misses them
            let lang = if rng.random_bool(0.2) { "es" } else { "en" };
            (Category::NotEnglish, user, lang, fill(FOREIGN_TEMPLATES.choose(&mut rng).unwrap(), drug, "", ""))
        } else {
            let user = cfg.signal_users + rng.random_range(0..cfg.noise_users);
            let drug2 = weighted_drug(&mut rng);
            (Category::Noise, user, "en", fill(NOISE_TEMPLATES.choose(&mut rng).unwrap(), drug, drug2, ""))
        };
        out.truth.insert(tweet_id, category);
        out.tweets.push(TweetRecord {
            tweet_id,
            user_id: 1_000 + user_id,
            date,
            text,
            user_lang: user_lang.into(),
            retweet: None,
        });
    }
    out
}

impl SynthCorpus {
    /// The tweets surviving the bundled cleansing rules, i.e. the pool that
    /// goes to the raters.
    pub fn annotation_pool(&self) -> Vec<TweetRecord> {
        apply_rules(&self.tweets, &default_rules()).kept
    }

    /// `tweet_id,effect` rows for every signal tweet.
    pub fn effects_csv(&self) -> String {
        let mut s = String::from("tweet_id,effect\n");
        for (id, tags) in &self.effects {
            for t in tags {
                s.push_str(&format!("{id},{t}\n"));
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaterModel {
    /// Probability the second rater's category matches the first.
    pub match_prob: f64,
    /// Half-width of the uniform noise on sentiment ratings.
    pub sentiment_spread: i8,
}

impl Default for RaterModel {
    fn default() -> Self {
        RaterModel {
            match_prob: 0.8,
            sentiment_spread: 1,
        }
    }
}

/// Drives the pool with two simulated raters until no task is left. The
/// first rater reports the truth; the second matches it with the model's
/// probability and otherwise picks another category at random.
pub fn simulate_raters(
    pool: &mut Pool,
    raters: [&str; 2],
    truth: &BTreeMap<u64, Category>,
    sentiments: &BTreeMap<u64, i8>,
    model: &RaterModel,
    seed: u64,
) -> Result<Vec<Annotation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = DateTime::<Utc>::from_timestamp(1_380_000_000, 0).expect("valid timestamp");
    let mut out = Vec::new();
    loop {
        let mut served = false;
        for (k, rater) in raters.iter().enumerate() {
            let Some(task) = pool.next_task(rater)? else { continue };
            served = true;
            let id = task.tweet_id;
            let true_cat = truth.get(&id).copied().unwrap_or(Category::Noise);
            let category = if k == 0 || rng.random_bool(model.match_prob) {
                true_cat
            } else {
                let others: Vec<Category> = Category::ALL.into_iter().filter(|&c| c != true_cat).collect();
                *others.choose(&mut rng).expect("two other categories")
            };
            let sentiment = (category == Category::Signal).then(|| {
                let base = sentiments.get(&id).copied().unwrap_or(0);
                jitter(&mut rng, base, model.sentiment_spread)
            });
            let a = Annotation {
                tweet_id: id,
                rater: rater.to_string(),
                category,
                sentiment,
                timestamp: origin + TimeDelta::seconds(out.len() as i64),
            };
            pool.submit(a.clone())?;
            out.push(a);
        }
        if !served {
            return Ok(out);
        }
    }
}

/// Two-class feature vectors over the nine classifier inputs, with class
/// differences of roughly the size seen between annotated signal and noise.
pub fn feature_examples(n_signal: usize, n_noise: usize, seed: u64) -> Vec<Example> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pois = |l: f64| Poisson::new(l).expect("positive rate");
    let beta = |a: f64, b: f64| Beta::new(a, b).expect("positive shape");
    let normal = |m: f64, s: f64| Normal::new(m, s).expect("positive sd");
    let mut out = Vec::with_capacity(n_signal + n_noise);
    for i in 0..n_signal + n_noise {
        let signal = i < n_signal;
        let pick = |s: f64, n: f64| if signal { s } else { n };
        let mut v = FeatureVector::default();
        v.set(Feature::PersonalCount, pois(pick(1.5, 0.2)).sample(&mut rng));
        v.set(Feature::TagNoun, beta(pick(3.0, 5.0), pick(5.0, 3.0)).sample(&mut rng));
        v.set(Feature::SisNoise, normal(pick(2.0, 2.6), 0.5).sample(&mut rng).max(0.0));
        v.set(Feature::SisSignal, normal(pick(2.6, 2.0), 0.5).sample(&mut rng).max(0.0));
        v.set(Feature::BigramsNoise, beta(pick(1.0, 2.0), 8.0).sample(&mut rng));
        v.set(Feature::IsEnglish, normal(pick(4.0, 3.5), 1.0).sample(&mut rng).max(0.05));
        v.set(Feature::CommonNoise, pois(pick(2.0, 3.0)).sample(&mut rng));
        v.set(Feature::CommonSignal, pois(pick(3.0, 2.0)).sample(&mut rng));
        v.set(Feature::NCharacters, rng.random_range(pick(40.0, 60.0)..150.0_f64).floor());
        out.push(Example {
            tweet_id: i as u64 + 1,
            features: v,
            signal,
        });
    }
    out
}
