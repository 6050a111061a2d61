//! Closed word lists for the count features and the bundled frequency lists
//! (top 2000 words per language) behind `is_english`.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::checksum::sha256_hex;
use crate::{Error, Result};

pub const MODAL: &[&str] = &[
    "should", "shoulda", "can", "could", "may", "might", "must", "ought", "shall", "would", "woulda",
];
pub const FUTURE: &[&str] = &["going", "will", "gonna", "should", "shoulda", "ll", "d"];
pub const PERSONAL: &[&str] = &["i", "me", "my", "mine", "ill", "im", "id", "myself"];
pub const NEGATIVE: &[&str] = &["not", "wont", "nt", "shouldnt", "couldnt"];
pub const SECOND_PRON: &[&str] = &["you", "youll", "yours", "yourself"];
pub const THIRD_PRON: &[&str] = &[
    "he", "she", "it", "his", "her", "its", "himself", "him", "herself", "itself", "they", "their",
    "them", "themselves",
];
pub const RELAT_PRON: &[&str] = &["that", "which", "who", "whose", "whichever", "whoever"];
pub const DEM_PRON: &[&str] = &["this", "these", "that", "those"];
pub const IND_PRON: &[&str] = &[
    "anybody", "anyone", "anything", "each", "either", "everyone", "everything", "neither",
    "nobody", "somebody", "something", "both", "few", "many", "several", "all", "any", "most",
    "none", "some",
];
pub const INT_PRON: &[&str] = &["what", "who", "which", "whom", "whose"];
pub const POS_NOISE: &[&str] = &[
    "new", "pill", "state", "states", "stats", "drug", "people", "approved", "approve", "approves",
    "approval", "approach", "prevention", "prevent", "prevents", "prevented",
];

/// Reconstructed list for `pharmacy`.
pub const PHARMACY: &[&str] = &["pharmacy", "pharma", "rx", "prescription"];

/// Apostrophe-free negated auxiliaries counted by `ncount`, besides any
/// token written with `n't`.
pub const NEGATED_AUX: &[&str] = &[
    "dont", "doesnt", "didnt", "cant", "couldnt", "shouldnt", "wouldnt", "wont", "isnt", "arent",
    "wasnt", "werent", "havent", "hasnt", "hadnt", "aint", "mustnt", "neednt",
];

/// Token form used for word-list lookups: apostrophes dropped, so `i'm`,
/// `i'll` and `won't` read as `im`, `ill` and `wont`.
pub fn list_form(token: &str) -> String {
    token.chars().filter(|&c| c != '\'').collect()
}

pub const FOREIGN_LANGUAGES: [&str; 9] = [
    "spanish",
    "portuguese",
    "french",
    "german",
    "dutch",
    "italian",
    "russian",
    "swedish",
    "danish",
];

const BUNDLED: [(&str, &str); 10] = [
    ("english", include_str!("../../data/wordlists/english.txt")),
    ("spanish", include_str!("../../data/wordlists/spanish.txt")),
    ("portuguese", include_str!("../../data/wordlists/portuguese.txt")),
    ("french", include_str!("../../data/wordlists/french.txt")),
    ("german", include_str!("../../data/wordlists/german.txt")),
    ("dutch", include_str!("../../data/wordlists/dutch.txt")),
    ("italian", include_str!("../../data/wordlists/italian.txt")),
    ("russian", include_str!("../../data/wordlists/russian.txt")),
    ("swedish", include_str!("../../data/wordlists/swedish.txt")),
    ("danish", include_str!("../../data/wordlists/danish.txt")),
];

const BUNDLED_SUMS: &str = include_str!("../../data/wordlists/SHA256SUMS");

/// English list plus the nine foreign lists, stored in list form.
#[derive(Debug, Clone)]
pub struct LanguageLists {
    english: HashSet<String>,
    foreign: Vec<(String, HashSet<String>)>,
}

fn parse_sums(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let sum = it.next()?;
            let file = it.next()?;
            Some((file.trim_start_matches('*').to_string(), sum.to_string()))
        })
        .collect()
}

fn word_set(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|w| !w.is_empty() && !w.starts_with('#'))
        .map(|w| list_form(&w.to_lowercase()))
        .collect()
}

impl LanguageLists {
    fn from_sources(sources: &[(String, String)], sums: &BTreeMap<String, String>) -> Result<Self> {
        let mut english = None;
        let mut foreign = Vec::new();
        for (lang, text) in sources {
            let file = format!("{lang}.txt");
            let expected = sums
                .get(&file)
                .ok_or_else(|| Error::invalid(format!("no checksum listed for {file}")))?;
            let found = sha256_hex(text.as_bytes());
            if &found != expected {
                return Err(Error::ChecksumMismatch {
                    what: file,
                    expected: expected.clone(),
                    found,
                });
            }
            if lang == "english" {
                english = Some(word_set(text));
            } else {
                foreign.push((lang.clone(), word_set(text)));
            }
        }
        Ok(LanguageLists {
            english: english.ok_or_else(|| Error::invalid("english word list missing"))?,
            foreign,
        })
    }

    /// The lists compiled into the crate, verified against their checksums.
    pub fn bundled() -> &'static LanguageLists {
        static LISTS: OnceLock<LanguageLists> = OnceLock::new();
        LISTS.get_or_init(|| {
            let sources: Vec<(String, String)> = BUNDLED
                .iter()
                .map(|(l, t)| (l.to_string(), t.to_string()))
                .collect();
            Self::from_sources(&sources, &parse_sums(BUNDLED_SUMS)).expect("bundled word lists are intact")
        })
    }

    /// Loads `english.txt` and the nine foreign lists from `dir`, checking
    /// each against `dir/SHA256SUMS`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let sums = parse_sums(&fs::read_to_string(dir.join("SHA256SUMS"))?);
        let mut sources = vec![("english".to_string(), fs::read_to_string(dir.join("english.txt"))?)];
        for lang in FOREIGN_LANGUAGES {
            sources.push((lang.to_string(), fs::read_to_string(dir.join(format!("{lang}.txt")))?));
        }
        Self::from_sources(&sources, &sums)
    }

    pub fn is_english_word(&self, form: &str) -> bool {
        self.english.contains(form)
    }

    /// How many of the foreign lists contain the word.
    pub fn foreign_hits(&self, form: &str) -> usize {
        self.foreign.iter().filter(|(_, set)| set.contains(form)).count()
    }

    /// True when any foreign list holds the word.
    pub fn is_foreign_word(&self, form: &str) -> bool {
        self.foreign.iter().any(|(_, set)| set.contains(form))
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.foreign.iter().map(|(l, _)| l.as_str())
    }

    /// `(1 + English tokens) / (1 + foreign tokens)`. A foreign token is one
    /// found in the union of the nine lists; a repeated token counts each
    /// time it occurs, but a token held by several lists counts once.
    pub fn is_english_ratio<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        let mut en = 0usize;
        let mut foreign = 0usize;
        for t in tokens {
            let form = list_form(t.as_ref());
            if self.is_english_word(&form) {
                en += 1;
            }
            if self.is_foreign_word(&form) {
                foreign += 1;
            }
        }
        (1 + en) as f64 / (1 + foreign) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lists_load_and_verify() {
        let lists = LanguageLists::bundled();
        assert_eq!(lists.languages().collect::<Vec<_>>(), FOREIGN_LANGUAGES);
        assert!(lists.is_english_word("the"));
        assert!(lists.is_english_word("dont"));
        assert!(lists.foreign_hits("de") >= 3);
        assert_eq!(lists.foreign_hits("и"), 1);
        assert!(!lists.is_english_word("и"));
        // top-2000 lists, not stopwords only
        assert!(lists.is_english_word("started"));
        assert!(lists.is_english_word("night"));
    }

    #[test]
    fn ratio_examples() {
        let lists = LanguageLists::bundled();
        let empty: [&str; 0] = [];
        assert_eq!(lists.is_english_ratio(&empty), 1.0);
        // five English-list words with no foreign hits
        let five = ["which", "because", "through", "should", "started"];
        for w in five {
            assert_eq!(lists.foreign_hits(w), 0, "{w}");
        }
        assert_eq!(lists.is_english_ratio(&five), 6.0);
        // "и" sits in one foreign list, "the" in every list: each counts once
        assert!(lists.foreign_hits("the") > 1);
        assert_eq!(lists.is_english_ratio(&["и", "the"]), 2.0 / 3.0);
        // repeats count every time
        assert_eq!(lists.is_english_ratio(&["и", "и", "и"]), 0.25);
    }

    #[test]
    fn tampered_list_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        for (lang, text) in BUNDLED {
            fs::write(dir.path().join(format!("{lang}.txt")), text).unwrap();
        }
        fs::write(dir.path().join("SHA256SUMS"), BUNDLED_SUMS).unwrap();
        assert!(LanguageLists::from_dir(dir.path()).is_ok());
        fs::write(dir.path().join("dutch.txt"), "de\nhet\n").unwrap();
        assert!(matches!(
            LanguageLists::from_dir(dir.path()),
            Err(Error::ChecksumMismatch { .. })
        ));
    }

    #[test]
    fn list_form_drops_apostrophes() {
        assert_eq!(list_form("i'll"), "ill");
        assert_eq!(list_form("won't"), "wont");
    }
}
