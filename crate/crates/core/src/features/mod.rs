//! Per-tweet feature vectors.
//!
//! Every tweet becomes a fixed vector of 37 reals. Word-list features count
//! token occurrences after dropping apostrophes (`i'm` counts as `im`);
//! corpus features compare the raw lowercase tokens against statistics of
//! the annotated classes.
//!
//! Accepted alternative names: `is_notenglish` for `in_notenglish`,
//! `wordscount` for `wordcount`, `tweetlength` for `ncharacters`, `nfull`
//! for `nful`, `commonnoise`/`commonsignal` for `common_noise`/`common_signal`.

mod pos;
mod separation;
mod stats;
mod wordlists;

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ingest::{tokenize, KeywordSet, LexemeList, TweetRecord};
use crate::{Error, Result};

pub use pos::{PosTag, PosTagger};
pub use separation::{separation_power, Binning, DEFAULT_BINS};
pub use stats::{
    bigram_share, common_weighted, similarity, similarity_ratio, top_fraction, ClassStats,
    CorpusStats, COMMON_FRACTION, STATS_VERSION,
};
pub use wordlists::{list_form, LanguageLists, FOREIGN_LANGUAGES};

macro_rules! features {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Feature { $($variant),* }

        impl Feature {
            pub const ALL: [Feature; features!(@count $($variant)*)] = [$(Feature::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Feature::$variant => $name),* }
            }
        }
    };
    (@count $($v:ident)*) => { 0 $(+ features!(@one $v))* };
    (@one $v:ident) => { 1 };
}

features! {
    ModalCount => "modalcount",
    FutureCount => "futurecount",
    PersonalCount => "personalcount",
    Negative => "negative",
    SecondPron => "secondpron",
    ThirdPron => "thirdpron",
    RelatPron => "relatpron",
    DemPron => "dempron",
    IndPron => "indpron",
    IntPron => "intpron",
    Percent => "percent",
    PosNoise => "posnoise",
    InNotEnglish => "in_notenglish",
    RegularPast => "regularpast",
    Gerund => "gerund",
    NMent => "nment",
    NFul => "nful",
    TagAdj => "tagadj",
    TagVerb => "tagverb",
    TagPrep => "tagprep",
    TagNoun => "tagnoun",
    TagConj => "tagconj",
    TagAdv => "tagadv",
    TagTo => "tagto",
    TagDeterm => "tagdeterm",
    SisNoise => "sis_noise",
    SisSignal => "sis_signal",
    IsEnglish => "is_english",
    BigramsNoise => "bigrams_noise",
    BigramsSignal => "bigrams_signal",
    Isolation => "isolation",
    CommonNoise => "common_noise",
    CommonSignal => "common_signal",
    WordCount => "wordcount",
    NCharacters => "ncharacters",
    NCount => "ncount",
    Pharmacy => "pharmacy",
}

pub const N_FEATURES: usize = Feature::ALL.len();

impl Feature {
    pub fn index(self) -> usize {
        self as usize
    }

    /// Features with reconstructed definitions, kept out of default sets.
    pub fn is_reconstructed(self) -> bool {
        matches!(self, Feature::NCount | Feature::Pharmacy)
    }
}

impl Serialize for Feature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Feature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canonical = match s.trim().to_lowercase().as_str() {
            "is_notenglish" => "in_notenglish".to_string(),
            "wordscount" => "wordcount".to_string(),
            "tweetlength" => "ncharacters".to_string(),
            "nfull" => "nful".to_string(),
            "commonnoise" => "common_noise".to_string(),
            "commonsignal" => "common_signal".to_string(),
            other => other.to_string(),
        };
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == canonical)
            .ok_or_else(|| Error::invalid(format!("unknown feature `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; N_FEATURES],
}

impl Default for FeatureVector {
    fn default() -> Self {
        FeatureVector {
            values: [0.0; N_FEATURES],
        }
    }
}

impl Index<Feature> for FeatureVector {
    type Output = f64;

    fn index(&self, f: Feature) -> &f64 {
        &self.values[f.index()]
    }
}

impl FeatureVector {
    pub fn get(&self, f: Feature) -> f64 {
        self.values[f.index()]
    }

    pub fn set(&mut self, f: Feature, v: f64) {
        self.values[f.index()] = v;
    }

    pub fn select(&self, features: &[Feature]) -> Vec<f64> {
        features.iter().map(|&f| self.get(f)).collect()
    }
}

fn count_in(forms: &[String], list: &[&str]) -> f64 {
    forms.iter().filter(|f| list.contains(&f.as_str())).count() as f64
}

/// Everything needed to turn text into a [`FeatureVector`].
#[derive(Debug, Clone, Copy)]
pub struct FeatureExtractor<'a> {
    pub stats: &'a CorpusStats,
    pub tagger: &'a PosTagger,
    pub languages: &'a LanguageLists,
    pub keywords: &'a KeywordSet,
}

impl<'a> FeatureExtractor<'a> {
    pub fn extract(&self, rec: &TweetRecord) -> Result<FeatureVector> {
        self.extract_text(&rec.text)
    }

    pub fn extract_text(&self, text: &str) -> Result<FeatureVector> {
        let lex = tokenize(text);
        self.extract_lexemes(text, &lex)
    }

    pub fn extract_lexemes(&self, text: &str, lex: &LexemeList) -> Result<FeatureVector> {
        use wordlists::*;
        use Feature as F;

        let tokens = &lex.tokens;
        let forms: Vec<String> = tokens.iter().map(|t| list_form(t)).collect();
        let words = tokens.len() as f64;
        let mut v = FeatureVector::default();

        v.set(F::ModalCount, count_in(&forms, MODAL));
        v.set(F::FutureCount, count_in(&forms, FUTURE));
        v.set(F::PersonalCount, count_in(&forms, PERSONAL));
        v.set(F::Negative, count_in(&forms, NEGATIVE));
        v.set(F::SecondPron, count_in(&forms, SECOND_PRON));
        v.set(F::ThirdPron, count_in(&forms, THIRD_PRON));
        v.set(F::RelatPron, count_in(&forms, RELAT_PRON));
        v.set(F::DemPron, count_in(&forms, DEM_PRON));
        v.set(F::IndPron, count_in(&forms, IND_PRON));
        v.set(F::IntPron, count_in(&forms, INT_PRON));
        v.set(F::Percent, text.chars().filter(|&c| c == '%').count() as f64);
        v.set(F::PosNoise, count_in(&forms, POS_NOISE));
        v.set(
            F::InNotEnglish,
            tokens.iter().filter(|t| self.stats.notenglish_words.contains(*t)).count() as f64,
        );
        let suffix = |s: &str| forms.iter().filter(|f| f.ends_with(s)).count() as f64;
        v.set(F::RegularPast, suffix("ed"));
        v.set(F::Gerund, suffix("ing"));
        v.set(F::NMent, suffix("ment"));
        v.set(F::NFul, suffix("full"));

        let tags = self.tagger.tag_all(tokens);
        let ratio = |tag: PosTag| {
            if tags.is_empty() {
                0.0
            } else {
                tags.iter().filter(|&&t| t == tag).count() as f64 / words
            }
        };
        v.set(F::TagAdj, ratio(PosTag::Adj));
        v.set(F::TagVerb, ratio(PosTag::Verb));
        v.set(F::TagPrep, ratio(PosTag::Prep));
        v.set(F::TagNoun, ratio(PosTag::Noun));
        v.set(F::TagConj, ratio(PosTag::Conj));
        v.set(F::TagAdv, ratio(PosTag::Adv));
        v.set(F::TagTo, ratio(PosTag::To));
        v.set(F::TagDeterm, ratio(PosTag::Determiner));

        let (noise, signal) = (&self.stats.noise, &self.stats.signal);
        v.set(F::SisNoise, similarity_ratio(tokens, &noise.token_counts, noise.token_total)?);
        v.set(F::SisSignal, similarity_ratio(tokens, &signal.token_counts, signal.token_total)?);
        v.set(F::IsEnglish, self.languages.is_english_ratio(tokens));
        v.set(F::BigramsNoise, bigram_share(tokens, &noise.bigrams, noise.bigram_total)?);
        v.set(F::BigramsSignal, bigram_share(tokens, &signal.bigrams, signal.bigram_total)?);
        v.set(F::Isolation, (self.keywords.count_in(lex) as f64 - 1.0).max(0.0));
        v.set(F::CommonNoise, common_weighted(tokens, &noise.common_weights));
        v.set(F::CommonSignal, common_weighted(tokens, &signal.common_weights));
        v.set(F::WordCount, words);
        v.set(F::NCharacters, lex.ncharacters as f64);
        v.set(
            F::NCount,
            tokens
                .iter()
                .zip(&forms)
                .filter(|(t, f)| t.ends_with("n't") || NEGATED_AUX.contains(&f.as_str()))
                .count() as f64,
        );
        v.set(F::Pharmacy, count_in(&forms, PHARMACY));
        Ok(v)
    }
}

/// Writes `tweet_id` followed by one column per feature.
pub fn write_features_csv<W: Write>(out: W, rows: &[(u64, FeatureVector)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["tweet_id".to_string()];
    header.extend(Feature::ALL.iter().map(|f| f.name().to_string()));
    w.write_record(&header)?;
    for (id, v) in rows {
        let mut rec = vec![id.to_string()];
        rec.extend(v.values.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a feature CSV. Columns may appear in any order and under accepted
/// alternative names; unknown columns are ignored. Every feature in
/// `required` must be present. Absent optional features read as NaN.
pub fn read_features_csv<R: Read>(input: R, required: &[Feature]) -> Result<Vec<(u64, FeatureVector)>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let mut id_col = None;
    let mut columns: BTreeMap<Feature, usize> = BTreeMap::new();
    for (i, h) in headers.iter().enumerate() {
        if h == "tweet_id" {
            id_col = Some(i);
        } else if let Ok(f) = h.parse::<Feature>() {
            columns.insert(f, i);
        }
    }
    let id_col = id_col.ok_or_else(|| Error::MissingFeature("tweet_id".into()))?;
    if let Some(missing) = required.iter().find(|f| !columns.contains_key(f)) {
        return Err(Error::MissingFeature(missing.name().into()));
    }
    let mut rows = Vec::new();
    for (n, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = n + 2;
        let id = rec
            .get(id_col)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::invalid(format!("features line {line}: bad tweet_id")))?;
        let mut v = FeatureVector {
            values: [f64::NAN; N_FEATURES],
        };
        for (&f, &col) in &columns {
            let x: f64 = rec
                .get(col)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::invalid(format!("features line {line}: bad value for `{f}`")))?;
            v.set(f, x);
        }
        rows.push((id, v));
    }
    Ok(rows)
}
