//! Four-threshold English cut and class yields.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::features::{Feature, FeatureVector};
use crate::labels::Category;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LangCut {
    /// Kept when `is_english >= min_is_english`.
    pub min_is_english: f64,
    /// Kept when `ncharacters < max_ncharacters`.
    pub max_ncharacters: f64,
    /// Kept when `in_notenglish < max_in_notenglish`.
    pub max_in_notenglish: f64,
    /// Kept when `wordcount / in_notenglish > min_word_ratio`.
    pub min_word_ratio: f64,
}

impl Default for LangCut {
    fn default() -> Self {
        LangCut {
            min_is_english: 1.0,
            max_ncharacters: 150.0,
            max_in_notenglish: 14.0,
            min_word_ratio: 1.0,
        }
    }
}

impl LangCut {
    /// A cut nothing fails.
    pub fn all_pass() -> Self {
        LangCut {
            min_is_english: f64::NEG_INFINITY,
            max_ncharacters: f64::INFINITY,
            max_in_notenglish: f64::INFINITY,
            min_word_ratio: f64::NEG_INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("min_is_english", self.min_is_english),
            ("max_ncharacters", self.max_ncharacters),
            ("max_in_notenglish", self.max_in_notenglish),
            ("min_word_ratio", self.min_word_ratio),
        ];
        for (name, v) in fields {
            if v.is_nan() {
                return Err(Error::invalid(format!("language cut `{name}` is not a number")));
            }
        }
        for (name, v) in [("max_ncharacters", self.max_ncharacters), ("max_in_notenglish", self.max_in_notenglish)] {
            if v <= 0.0 {
                return Err(Error::invalid(format!("language cut `{name}` must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn passes(&self, v: &FeatureVector) -> bool {
        let foreign = v[Feature::InNotEnglish];
        // no foreign-word evidence never rejects
        let ratio_ok = foreign == 0.0 || v[Feature::WordCount] / foreign > self.min_word_ratio;
        v[Feature::IsEnglish] >= self.min_is_english
            && v[Feature::NCharacters] < self.max_ncharacters
            && foreign < self.max_in_notenglish
            && ratio_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct YieldRow {
    pub class: Category,
    pub before: u64,
    pub after: u64,
}

/// Per-class counts before and after the cut, for the classes present.
pub fn yield_report<'a, I>(rows: I, cut: &LangCut) -> Vec<YieldRow>
where
    I: IntoIterator<Item = (Category, &'a FeatureVector)>,
{
    let mut table: BTreeMap<usize, YieldRow> = BTreeMap::new();
    for (class, v) in rows {
        let slot = Category::ALL.iter().position(|c| *c == class).expect("known category");
        let row = table.entry(slot).or_insert(YieldRow {
            class,
            before: 0,
            after: 0,
        });
        row.before += 1;
        if cut.passes(v) {
            row.after += 1;
        }
    }
    table.into_values().collect()
}
