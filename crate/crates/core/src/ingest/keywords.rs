use std::collections::BTreeSet;

use super::tokenize::{stem, tokenize, LexemeList};
use crate::{Error, Result};

/// The collection keywords. Multiword terms contribute each of their words.
pub const HIV_KEYWORD_TERMS: [&str; 29] = [
    "Sustiva",
    "Stocrin",
    "Viread",
    "FTC",
    "Ziagen",
    "3TC",
    "Epivir",
    "Retrovir",
    "Viramune",
    "Edurant",
    "Prezista",
    "Reyataz",
    "Norvir",
    "Kaletra",
    "Isentress",
    "Tivicay",
    "Atripla",
    "Trizivir",
    "Truvada",
    "Combivir",
    "Kivexa",
    "Epzicom",
    "Complera",
    "Stribild",
    "HIV treatment",
    "HIV drug",
    "anti-hiv",
    "triple therapy hiv",
    "anti hiv",
];

/// Stemmed keyword lexemes, matched exactly against tweet lexemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordSet {
    keywords: BTreeSet<String>,
}

impl KeywordSet {
    pub fn from_terms<S: AsRef<str>>(terms: &[S]) -> Result<Self> {
        let keywords: BTreeSet<String> = terms
            .iter()
            .flat_map(|t| tokenize(t.as_ref()).lexemes)
            .collect();
        if keywords.is_empty() {
            return Err(Error::invalid("keyword set is empty"));
        }
        Ok(KeywordSet { keywords })
    }

    pub fn hiv_default() -> Self {
        Self::from_terms(&HIV_KEYWORD_TERMS).expect("built-in keywords are non-empty")
    }

    pub fn contains(&self, lexeme: &str) -> bool {
        self.keywords.contains(lexeme)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.keywords.contains(&stem(&word.to_lowercase()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    /// Number of distinct keyword lexemes present.
    pub fn count_in(&self, lex: &LexemeList) -> usize {
        lex.lexemes.intersection(&self.keywords).count()
    }
}

/// True iff at least one tweet lexeme equals a keyword lexeme.
///
/// Matching is on whole lexemes: `giftcard` never triggers `ftc`.
pub fn keyword_gate(lex: &LexemeList, kw: &KeywordSet) -> bool {
    !lex.lexemes.is_disjoint(&kw.keywords)
}
