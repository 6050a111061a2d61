//! Acceptance criteria 1 to 10. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stderr, so the verdicts show up even when libtest
//! captures output, and then asserts.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use chrono::{DateTime, Days, NaiveDate, Utc};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use cohort_core::analytics::{
    drug_mention_series, sentiment_drug_correlation, sentiment_series, side_effect_pairs, DrugLexicon, Filters,
    PairRow, StudyCorpus, StudyTweet, TimeBins, MIN_PAIR_USERS,
};
use cohort_core::annotate::{read_log, AnnotationLog, Pool, PoolConfig};
use cohort_core::classifier::{
    class_scores, kept_fraction, pick_threshold, Role, SplitFractions, SvmModel, TrainConfig, TrainSplit,
};
use cohort_core::cleanse::{loss_probability, poisson_scale};
use cohort_core::features::{separation_power, Binning, CorpusStats, FeatureExtractor, LanguageLists, PosTagger};
use cohort_core::ingest::{KeywordSet, TweetRecord};
use cohort_core::labels::{write_labeled, Category, LabeledTweet};
use cohort_core::langfilter::{yield_report, LangCut};
use cohort_core::synth::{feature_examples, generate_corpus, simulate_raters, CorpusConfig, RaterModel};

fn verdict(n: u32, ok: bool, detail: &str) {
    let line = format!("criterion {n}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

// ---- 1. loss bounds -------------------------------------------------------

/// Tail probabilities at 40 digits (mpmath), for the double nearest each input.
const ORACLE_PROB_67: f64 = 4.034_184_211_180_066e-6;
const ORACLE_PROB_100: f64 = 4.948_367_312_622_815e-6;
const PROB_TOLERANCE: f64 = 1e-10;

#[test]
fn criterion_01_loss_bounds() {
    let a = loss_probability(6.7, 2.6, 3, 0.0).unwrap();
    let b = loss_probability(10.0, 3.2, 2, 0.0).unwrap();
    let a_accurate = (a.prob - ORACLE_PROB_67).abs() < PROB_TOLERANCE;
    let b_accurate = (b.prob - ORACLE_PROB_100).abs() < PROB_TOLERANCE;
    let a_bound = a.prob < 4e-6;
    let b_bound = b.prob < 5e-6;
    verdict(
        1,
        a_accurate && b_accurate && a_bound && b_bound,
        &format!(
            "(6.7, 2.6, 3): z={:.5} prob={:.4e} [< 4e-6: {a_bound}, oracle: {a_accurate}]; \
             (10.0, 3.2, 2): z={:.5} prob={:.4e} [< 5e-6: {b_bound}, oracle: {b_accurate}]",
            a.z, a.prob, b.z, b.prob
        ),
    );
}

// ---- 2. Poisson scaling ---------------------------------------------------

#[test]
fn criterion_02_poisson_scale() {
    let (expected, sigma) = poisson_scale(24, 500, 140).unwrap();
    let ok = (expected - 6.72).abs() < 1e-12
        && (sigma - 6.72f64.sqrt()).abs() < 1e-12
        && format!("{expected:.1} ± {sigma:.1}") == "6.7 ± 2.6"
        && format!("{sigma:.2}") == "2.59";
    verdict(2, ok, &format!("expected={expected} sigma={sigma:.6}"));
}

// ---- 3. sentiment sums ----------------------------------------------------

const PSI_BINS: usize = 200;

#[test]
fn criterion_03_psi_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let origin = NaiveDate::from_ymd_opt(2010, 1, 1).unwrap();
    let bins = TimeBins {
        origin,
        width_days: 7,
        end: origin + Days::new(PSI_BINS as u64 * 7 - 1),
    };
    let mut oracle = vec![(0i64, 0u64); PSI_BINS];
    let mut tweets = Vec::new();
    let mut id = 0;
    for (b, slot) in oracle.iter_mut().enumerate() {
        for _ in 0..rng.random_range(0..40) {
            id += 1;
            let s: i8 = rng.random_range(-5..=5);
            slot.0 += i64::from(s);
            slot.1 += 1;
            let date = origin + Days::new(b as u64 * 7 + rng.random_range(0..7));
            let rec = TweetRecord {
                tweet_id: id,
                user_id: id,
                date,
                text: "my atripla".into(),
                user_lang: "en".into(),
                retweet: None,
            };
            tweets.push(StudyTweet::new(rec, Some(s), BTreeSet::new()));
        }
    }
    let series = sentiment_series(&StudyCorpus::new(tweets), &bins, &Filters::default(), None).unwrap();
    let mut bad = Vec::new();
    for (k, (bin, &(psi, n))) in series.bins.iter().zip(&oracle).enumerate() {
        let bounded = bin.psi.abs() <= 5 * bin.n as i64;
        if bin.psi != psi || bin.n != n || bin.sigma() != (n as f64).sqrt() || !bounded {
            bad.push(k);
        }
    }
    let ok = series.bins.len() == PSI_BINS && bad.is_empty();
    verdict(3, ok, &format!("{} bins, {} tweets, mismatched bins {bad:?}", series.bins.len(), id));
}

// ---- 4. threshold semantics -----------------------------------------------

const THRESHOLD_TARGET: f64 = 0.9;

#[test]
fn criterion_04_threshold_semantics() {
    let ladder: Vec<f64> = (1..=20).map(|k| 0.05 * f64::from(k)).collect();
    let t = pick_threshold(&ladder, THRESHOLD_TARGET).unwrap();
    let ladder_ok = t == 0.05 * 2.0;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for _ in 0..2000 {
        let n = rng.random_range(1..300);
        // coarse grid so ties are common
        let levels = rng.random_range(1..50);
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..levels)) / f64::from(levels)).collect();
        let t = pick_threshold(&scores, THRESHOLD_TARGET).unwrap();
        let kept = kept_fraction(&scores, t);
        let floor = THRESHOLD_TARGET - 1.0 / n as f64;
        worst = worst.min(kept - floor);
        if kept < floor {
            failures += 1;
        }
    }
    verdict(
        4,
        ladder_ok && failures == 0,
        &format!("ladder threshold {t} (want 0.10); 2000 random sets, {failures} below 90% - 1/n, min margin {worst:.4}"),
    );
}

// ---- 5. operating point ---------------------------------------------------

const OP_EFFICIENCY: f64 = 0.9;
const OP_REJECTION: f64 = 0.8;
const OP_SEEDS: u64 = 10;
const OP_MIN_PASSING: usize = 8;

#[test]
fn criterion_05_operating_point() {
    let mut passing = 0;
    let mut details = Vec::new();
    for seed in 0..OP_SEEDS {
        let examples = feature_examples(300, 600, seed);
        let ids: Vec<(u64, bool)> = examples.iter().map(|e| (e.tweet_id, e.signal)).collect();
        let split = TrainSplit::new(&ids, &SplitFractions::default(), seed).unwrap();
        let model = SvmModel::train(&examples, &split, &TrainConfig::default()).unwrap();
        let test: Vec<_> = examples.iter().filter(|e| split.role(e.tweet_id) == Some(Role::Test)).cloned().collect();
        let (signal, noise) = class_scores(&model, &test).unwrap();
        let t = pick_threshold(&signal, OP_EFFICIENCY).unwrap();
        let eff = kept_fraction(&signal, t);
        let rej = 1.0 - kept_fraction(&noise, t);
        if eff >= OP_EFFICIENCY && rej >= OP_REJECTION {
            passing += 1;
        }
        details.push(format!("{eff:.2}/{rej:.2}"));
    }
    verdict(
        5,
        passing >= OP_MIN_PASSING,
        &format!("{passing}/{OP_SEEDS} seeds reach efficiency/rejection >= {OP_EFFICIENCY}/{OP_REJECTION}: {}", details.join(" ")),
    );
}

// ---- 6. language cut ------------------------------------------------------

const LANG_MIN_FOREIGN_REMOVED: f64 = 0.9;
const LANG_MIN_SIGNAL_KEPT: f64 = 0.9;

fn truth_labels(seed: u64) -> Vec<LabeledTweet> {
    let corpus = generate_corpus(&CorpusConfig::default(), seed);
    corpus
        .tweets
        .iter()
        .map(|r| LabeledTweet {
            record: r.clone(),
            category: corpus.truth[&r.tweet_id],
            sentiment: corpus.sentiments.get(&r.tweet_id).copied(),
        })
        .collect()
}

#[test]
fn criterion_06_language_cut() {
    let tagger = PosTagger::default();
    let keywords = KeywordSet::hiv_default();
    let mut ok = true;
    let mut details = Vec::new();
    for seed in [6, 16, 26] {
        // statistics from one annotated corpus, the cut applied to another
        let stats = CorpusStats::build(&truth_labels(seed)).unwrap();
        let extractor = FeatureExtractor {
            stats: &stats,
            tagger: &tagger,
            languages: LanguageLists::bundled(),
            keywords: &keywords,
        };
        let held_out = truth_labels(seed + 1000);
        let vectors: Vec<_> = held_out.iter().map(|l| extractor.extract(&l.record).unwrap()).collect();
        let report = yield_report(held_out.iter().map(|l| l.category).zip(&vectors), &LangCut::default());
        let share = |c: Category| {
            let row = report.iter().find(|r| r.class == c).expect("class present");
            row.after as f64 / row.before as f64
        };
        let monotone = report.iter().all(|r| r.after <= r.before);
        let signal_kept = share(Category::Signal);
        let foreign_removed = 1.0 - share(Category::NotEnglish);
        ok &= monotone && signal_kept >= LANG_MIN_SIGNAL_KEPT && foreign_removed >= LANG_MIN_FOREIGN_REMOVED;
        details.push(format!(
            "seed {seed}: signal kept {signal_kept:.3}, noise kept {:.3}, not-English removed {foreign_removed:.3}",
            share(Category::Noise)
        ));
    }
    verdict(6, ok, &details.join("; "));
}

// ---- 7. separation power --------------------------------------------------

const SEPARATION_TOLERANCE: f64 = 0.02;

fn gaussian(n: usize, mean: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = Normal::new(mean, 1.0).unwrap();
    (0..n).map(|_| d.sample(rng)).collect()
}

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `1/2 ∫ (f - g)^2 / (f + g)` for unit normals `shift` apart, composite Simpson.
fn gaussian_separation(shift: f64) -> f64 {
    let (lo, hi) = (-12.0, shift + 12.0);
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let f = |x: f64| {
        let (a, b) = (phi(x), phi(x - shift));
        if a + b == 0.0 { 0.0 } else { (a - b).powi(2) / (a + b) }
    };
    let mut sum = f(lo) + f(hi);
    for i in 1..n {
        sum += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 * sum * h / 3.0
}

#[test]
fn criterion_07_separation_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = gaussian(1000, 0.0, &mut rng);
    let identical = separation_power(&a, &a, 40, Binning::Uniform).unwrap();
    let far: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
    let disjoint = separation_power(&a, &far, 40, Binning::Uniform).unwrap();
    let mut ok = identical == 0.0 && (disjoint - 1.0).abs() < 1e-12;
    let mut details = vec![format!("identical {identical}, disjoint {disjoint}")];

    for shift in [0.5, 1.0, 2.0] {
        let s = gaussian(200_000, shift, &mut rng);
        let b = gaussian(200_000, 0.0, &mut rng);
        let measured = separation_power(&s, &b, 40, Binning::Uniform).unwrap();
        let oracle = gaussian_separation(shift);
        ok &= (measured - oracle).abs() <= SEPARATION_TOLERANCE;
        details.push(format!("shift {shift}: {measured:.4} vs {oracle:.4}"));
    }

    let noise = gaussian(5000, 0.0, &mut rng);
    let ranked: Vec<f64> = [0.3, 0.8, 1.6]
        .iter()
        .map(|&m| separation_power(&gaussian(5000, m, &mut rng), &noise, 40, Binning::Uniform).unwrap())
        .collect();
    ok &= ranked.windows(2).all(|w| w[0] < w[1]);
    details.push(format!("ranking {ranked:.3?}"));
    verdict(7, ok, &details.join("; "));
}

// ---- 8. analytics oracles -------------------------------------------------

const CORRELATION_TOLERANCE: f64 = 1e-12;

/// Drug names with the spellings planted in tweets.
const PLANTED_DRUGS: &[(&str, &[&str])] = &[
    ("Atripla", &["Atripla", "atripla"]),
    ("Truvada", &["Truvada"]),
    ("Isentress", &["isentress"]),
    ("Emtriva", &["Emtriva", "FTC"]),
    ("Epivir", &["Epivir", "3TC"]),
    ("Kivexa", &["Kivexa", "Epzicom"]),
    ("Sustiva", &["Sustiva", "stocrin"]),
    ("Norvir", &["norvir"]),
    ("Viread", &["Viread"]),
];
const FILLER: &[&str] = &["feeling", "today", "doctor", "week", "night", "started", "switching", "#hiv", "lol", "again"];
const TAGS: &[&str] = &["nightmares", "vivid dreams", "insomnia", "nausea", "headache", "fatigue", "rash", "none"];

struct Planted {
    tweet: StudyTweet,
    drugs: BTreeSet<&'static str>,
    retweet: bool,
}

fn planted_corpus(n: usize, seed: u64) -> Vec<Planted> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = NaiveDate::from_ymd_opt(2010, 8, 1).unwrap();
    (0..n)
        .map(|i| {
            let mut words = Vec::new();
            let leading_rt = rng.random_bool(0.1);
            if leading_rt {
                words.push("RT @friend:".to_string());
            }
            let mut drugs = BTreeSet::new();
            for _ in 0..rng.random_range(0..3) {
                let (name, spellings) = PLANTED_DRUGS.choose(&mut rng).unwrap();
                drugs.insert(*name);
                words.push(spellings.choose(&mut rng).unwrap().to_string());
            }
            for _ in 0..rng.random_range(1..5) {
                words.push(FILLER.choose(&mut rng).unwrap().to_string());
            }
            let flagged = rng.random_bool(0.05);
            let rec = TweetRecord {
                tweet_id: 10_000 + i as u64,
                user_id: rng.random_range(1..40),
                // a little before and after the study window
                date: origin + Days::new(rng.random_range(0..1200)),
                text: words.join(" "),
                user_lang: "en".into(),
                retweet: flagged.then_some(true),
            };
            let sentiment = rng.random_bool(0.85).then(|| rng.random_range(-5..=5));
            let effects: BTreeSet<String> = (0..rng.random_range(0..3)).map(|_| TAGS.choose(&mut rng).unwrap().to_string()).collect();
            Planted {
                tweet: StudyTweet::new(rec, sentiment, effects),
                drugs,
                retweet: leading_rt || flagged,
            }
        })
        .collect()
}

fn passes(p: &Planted, f: &Filters) -> bool {
    if f.exclude_retweets && p.retweet {
        return false;
    }
    !(f.require_side_effects && !p.tweet.effects.iter().any(|e| e != "none"))
}

fn in_window(bins: &TimeBins, date: NaiveDate) -> Option<usize> {
    (date >= bins.origin && date <= bins.end).then(|| ((date - bins.origin).num_days() / i64::from(bins.width_days)) as usize)
}

fn oracle_mentions(tweets: &[&Planted], bins: &TimeBins, f: &Filters) -> BTreeMap<String, Vec<u64>> {
    let nbins = in_window(bins, bins.end).unwrap() + 1;
    let mut out: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    let mut anchored = BTreeSet::new();
    for p in tweets {
        let Some(b) = in_window(bins, p.tweet.record.date).filter(|_| passes(p, f)) else { continue };
        for d in &p.drugs {
            if f.unique_users_only && !anchored.insert((p.tweet.record.user_id, *d)) {
                continue;
            }
            out.entry(d.to_string()).or_insert_with(|| vec![0; nbins])[b] += 1;
        }
    }
    out
}

fn oracle_sentiment(tweets: &[&Planted], bins: &TimeBins, f: &Filters) -> Vec<(i64, u64)> {
    let nbins = in_window(bins, bins.end).unwrap() + 1;
    let mut out = vec![(0, 0); nbins];
    let mut anchored = BTreeSet::new();
    for p in tweets {
        let Some(b) = in_window(bins, p.tweet.record.date).filter(|_| passes(p, f)) else { continue };
        let Some(s) = p.tweet.sentiment else { continue };
        if f.unique_users_only && !anchored.insert(p.tweet.record.user_id) {
            continue;
        }
        out[b].0 += i64::from(s);
        out[b].1 += 1;
    }
    out
}

fn oracle_pairs(tweets: &[&Planted]) -> (Vec<(String, String, u64)>, BTreeMap<String, u64>) {
    let mut users: BTreeMap<(String, String), BTreeSet<u64>> = BTreeMap::new();
    let mut totals = BTreeMap::new();
    for p in tweets {
        for d in &p.drugs {
            *totals.entry(d.to_string()).or_insert(0) += 1;
            for e in &p.tweet.effects {
                users.entry((d.to_string(), e.clone())).or_default().insert(p.tweet.record.user_id);
            }
        }
    }
    let mut rows: Vec<_> = users
        .into_iter()
        .filter(|(_, u)| u.len() as u64 >= MIN_PAIR_USERS)
        .map(|((d, e), u)| (d, e, u.len() as u64))
        .collect();
    rows.sort();
    (rows, totals)
}

/// r = (nΣxy − ΣxΣy) / sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²)).
fn textbook_pearson(xy: &[(f64, f64)]) -> Option<f64> {
    let n = xy.len() as f64;
    let (sx, sy) = (xy.iter().map(|p| p.0).sum::<f64>(), xy.iter().map(|p| p.1).sum::<f64>());
    let sxy: f64 = xy.iter().map(|p| p.0 * p.1).sum();
    let sxx: f64 = xy.iter().map(|p| p.0 * p.0).sum();
    let syy: f64 = xy.iter().map(|p| p.1 * p.1).sum();
    let den = ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt();
    (xy.len() >= 3 && den > 0.0).then(|| (n * sxy - sx * sy) / den)
}

#[test]
fn criterion_08_analytics_oracles() {
    let planted = planted_corpus(500, 8);
    let mut sorted: Vec<&Planted> = planted.iter().collect();
    sorted.sort_by_key(|p| (p.tweet.record.date, p.tweet.record.tweet_id));
    let corpus = StudyCorpus::new(planted.iter().map(|p| p.tweet.clone()).collect());
    let lexicon = DrugLexicon::bundled();
    let bins = TimeBins::default();
    let mut mismatches = Vec::new();
    let mut correlations = 0;

    for f in Filters::all() {
        let series = drug_mention_series(&corpus, &lexicon, &bins, &f);
        let want = oracle_mentions(&sorted, &bins, &f);
        for (drug, counts) in &series.counts {
            let expected = want.get(drug).cloned().unwrap_or_else(|| vec![0; bins.len()]);
            if *counts != expected {
                mismatches.push(format!("mentions {drug} {f:?}"));
            }
        }
        if want.keys().any(|d| !series.counts.contains_key(d)) {
            mismatches.push(format!("mentions missing drug {f:?}"));
        }

        let sentiment = sentiment_series(&corpus, &bins, &f, None).unwrap();
        let want_s = oracle_sentiment(&sorted, &bins, &f);
        if sentiment.bins.iter().map(|b| (b.psi, b.n)).collect::<Vec<_>>() != want_s {
            mismatches.push(format!("sentiment {f:?}"));
        }

        let totals: Vec<u64> = (0..bins.len()).map(|b| want.values().map(|c| c[b]).sum()).collect();
        let xy: Vec<(f64, f64)> = want_s
            .iter()
            .zip(&totals)
            .filter(|((_, n), _)| *n > 0)
            .map(|((psi, _), &m)| (*psi as f64, m as f64))
            .collect();
        match (sentiment_drug_correlation(&sentiment, &series.totals()), textbook_pearson(&xy)) {
            (Ok(r), Some(want_r)) if (r - want_r).abs() <= CORRELATION_TOLERANCE => correlations += 1,
            (Err(_), None) => {}
            (got, want_r) => mismatches.push(format!("correlation {f:?}: {got:?} vs {want_r:?}")),
        }
    }

    let table = side_effect_pairs(&corpus, &lexicon);
    let (want_rows, want_totals) = oracle_pairs(&sorted);
    let mut got_rows: Vec<_> = table.rows.iter().map(|PairRow { drug, effect, users }| (drug.clone(), effect.clone(), *users)).collect();
    got_rows.sort();
    if got_rows != want_rows {
        mismatches.push("pairs".into());
    }
    let got_totals: BTreeMap<String, u64> = table.drug_totals.into_iter().filter(|(_, n)| *n > 0).collect();
    if got_totals != want_totals {
        mismatches.push("drug totals".into());
    }
    let suppressed_ok = table.rows.iter().all(|r| r.users >= MIN_PAIR_USERS);

    verdict(
        8,
        mismatches.is_empty() && suppressed_ok && correlations > 0,
        &format!(
            "500 tweets, 8 filter combinations, {} pairs, {correlations} defined correlations; mismatches {mismatches:?}",
            want_rows.len()
        ),
    );
}

// ---- 9. determinism -------------------------------------------------------

#[test]
fn criterion_09_determinism() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let started = std::time::Instant::now();
    common::run_pipeline(a.path());
    common::run_pipeline(b.path());
    let (ta, tb) = (common::tree(a.path()), common::tree(b.path()));
    let names: Vec<&str> = ta.iter().map(|(n, _)| n.as_str()).collect();
    let differing: Vec<&str> = ta
        .iter()
        .zip(&tb)
        .filter(|((na, ca), (nb, cb))| na != nb || ca != cb)
        .map(|((n, _), _)| n.as_str())
        .collect();
    let ok = ta.len() == tb.len() && differing.is_empty() && names.contains(&"manifest.json");
    verdict(
        9,
        ok,
        &format!("{} files per run, differing {differing:?}, {:.1}s for both runs", ta.len(), started.elapsed().as_secs_f64()),
    );
}

// ---- 10. annotation resolution --------------------------------------------

const AGREEMENT_TARGET: f64 = 0.8;
const AGREEMENT_TOLERANCE: f64 = 0.04;

#[test]
fn criterion_10_annotation_resolution() {
    let corpus = generate_corpus(&CorpusConfig { tweets: 1000, ..CorpusConfig::default() }, 10);
    let raters = ["first", "second"];
    let mut pool = Pool::new(corpus.tweets.clone(), raters, PoolConfig::default()).unwrap();
    let log = simulate_raters(&mut pool, raters, &corpus.truth, &corpus.sentiments, &RaterModel::default(), 11).unwrap();
    let rate = pool.agreement_rate().unwrap();
    let exported = pool.export_labels();
    let only_agreed = exported.iter().all(|row| {
        let r = pool.ratings(row.record.tweet_id);
        r.len() == 2 && r[0].category == r[1].category && r[0].category == row.category
    });
    let stats = pool.stats();

    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("annotations.jsonl");
    let mut writer = AnnotationLog::open(&log_path).unwrap();
    for a in &log {
        writer.append(a).unwrap();
    }
    drop(writer);
    let mut replayed = Pool::new(corpus.tweets.clone(), raters, PoolConfig::default()).unwrap();
    replayed.replay(read_log(&log_path).unwrap()).unwrap();
    let bytes = |rows: &[LabeledTweet]| {
        let mut out = Vec::new();
        write_labeled(rows, &mut out).unwrap();
        out
    };
    let same_bytes = bytes(&exported) == bytes(&replayed.export_labels());
    // the log keeps the submission timestamps it was written with
    let stamps_kept = read_log(&log_path).unwrap().iter().map(|a| a.timestamp).collect::<Vec<DateTime<Utc>>>()
        == log.iter().map(|a| a.timestamp).collect::<Vec<_>>();

    let ok = stats.doubly_rated == 1000
        && (rate - AGREEMENT_TARGET).abs() <= AGREEMENT_TOLERANCE
        && only_agreed
        && exported.len() == stats.agreed
        && same_bytes
        && stamps_kept;
    verdict(
        10,
        ok,
        &format!(
            "agreement {rate:.3} over {} tweets, {} exported (agreed {}), replay byte-identical {same_bytes}",
            stats.doubly_rated,
            exported.len(),
            stats.agreed
        ),
    );
}
