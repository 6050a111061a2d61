//! Drug lexicon and side-effect vocabulary.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use crate::ingest::{stem, LexemeList};
use crate::{Error, Result};

pub const DEFAULT_DRUGS: &str = include_str!("../../data/drugs.txt");
pub const DEFAULT_EFFECTS: &str = include_str!("../../data/effects.txt");

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Drug name to the lexemes that count as a mention of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrugLexicon {
    drugs: BTreeMap<String, BTreeSet<String>>,
}

impl DrugLexicon {
    /// Parses `Name: synonym, synonym` lines. The name is a synonym of itself.
    pub fn parse(text: &str) -> Result<Self> {
        let mut drugs: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut owner: BTreeMap<String, String> = BTreeMap::new();
        for (n, line) in content_lines(text) {
            let (name, rest) = line.split_once(':').unwrap_or((line, ""));
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::invalid(format!("drug lexicon line {n}: empty drug name")));
            }
            if drugs.contains_key(name) {
                return Err(Error::invalid(format!("drug lexicon line {n}: `{name}` listed twice")));
            }
            let mut lexemes = BTreeSet::new();
            for word in std::iter::once(name).chain(rest.split(',')) {
                let word = word.trim().to_lowercase();
                if word.is_empty() {
                    continue;
                }
                if word.split_whitespace().count() > 1 {
                    return Err(Error::invalid(format!("drug lexicon line {n}: `{word}` is not a single word")));
                }
                let lexeme = stem(&word);
                if let Some(other) = owner.get(&lexeme).filter(|o| o.as_str() != name) {
                    return Err(Error::invalid(format!(
                        "drug lexicon line {n}: `{word}` already names {other}"
                    )));
                }
                owner.insert(lexeme.clone(), name.to_string());
                lexemes.insert(lexeme);
            }
            drugs.insert(name.to_string(), lexemes);
        }
        if drugs.is_empty() {
            return Err(Error::invalid("drug lexicon is empty"));
        }
        Ok(DrugLexicon { drugs })
    }

    pub fn from_reader<R: Read>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::parse(&text)
    }

    pub fn bundled() -> Self {
        Self::parse(DEFAULT_DRUGS).expect("bundled drug lexicon is valid")
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.drugs.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.drugs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.drugs.is_empty()
    }

    pub fn contains(&self, drug: &str) -> bool {
        self.drugs.contains_key(drug)
    }

    pub fn synonyms(&self, drug: &str) -> Option<&BTreeSet<String>> {
        self.drugs.get(drug)
    }

    /// Drugs mentioned in a tweet, each at most once, in name order.
    pub fn mentions<'a>(&'a self, lex: &LexemeList) -> Vec<&'a str> {
        self.drugs
            .iter()
            .filter(|(_, syn)| !syn.is_disjoint(&lex.lexemes))
            .map(|(name, _)| name.as_str())
            .collect()
    }
}

/// The controlled vocabulary of side-effect tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectVocabulary {
    tags: BTreeSet<String>,
}

/// Tag for a tweet rated as reporting no side effect.
pub const NO_EFFECT: &str = "none";

impl EffectVocabulary {
    pub fn parse(text: &str) -> Result<Self> {
        let tags: BTreeSet<String> = content_lines(text).map(|(_, l)| l.to_lowercase()).collect();
        if tags.is_empty() {
            return Err(Error::invalid("effect vocabulary is empty"));
        }
        Ok(EffectVocabulary { tags })
    }

    pub fn bundled() -> Self {
        Self::parse(DEFAULT_EFFECTS).expect("bundled effect vocabulary is valid")
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }
}

/// Reads a `tweet_id,effect` CSV; a tweet may have several rows.
pub fn read_effect_tags<R: Read>(r: R, vocab: &EffectVocabulary) -> Result<BTreeMap<u64, BTreeSet<String>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::invalid(format!("effect tags: missing `{name}` column")))
    };
    let (id_col, effect_col) = (col("tweet_id")?, col("effect")?);
    let mut out: BTreeMap<u64, BTreeSet<String>> = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let id: u64 = row
            .get(id_col)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::invalid(format!("effect tags line {line}: bad tweet_id")))?;
        let effect = row.get(effect_col).unwrap_or("").to_lowercase();
        if !vocab.contains(&effect) {
            return Err(Error::invalid(format!("effect tags line {line}: unknown effect `{effect}`")));
        }
        out.entry(id).or_default().insert(effect);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::tokenize;

    #[test]
    fn bundled_lexicon_groups_brands() {
        let lex = DrugLexicon::bundled();
        assert_eq!(lex.mentions(&tokenize("Switched from Stocrin to #Atripla")), vec!["Atripla", "Sustiva"]);
        assert_eq!(lex.mentions(&tokenize("3TC and epivir")), vec!["Epivir"]);
        assert!(lex.mentions(&tokenize("giftcard")).is_empty());
        assert_eq!(lex.len(), 21);
    }

    #[test]
    fn synonyms_must_be_disjoint() {
        assert!(DrugLexicon::parse("A: x\nB: x").is_err());
        assert!(DrugLexicon::parse("A: b\nB:").is_err());
        assert!(DrugLexicon::parse("A:\nA:").is_err());
        assert!(DrugLexicon::parse("# nothing").is_err());
        assert!(DrugLexicon::parse("A: x, x").is_ok());
    }

    #[test]
    fn effect_tags_are_validated() {
        let vocab = EffectVocabulary::bundled();
        let ok = read_effect_tags("tweet_id,effect\n1,nausea\n1,Insomnia\n2,none\n".as_bytes(), &vocab).unwrap();
        assert_eq!(ok[&1].len(), 2);
        assert!(ok[&2].contains(NO_EFFECT));
        assert!(read_effect_tags("tweet_id,effect\n1,sneezing\n".as_bytes(), &vocab).is_err());
        assert!(read_effect_tags("id,effect\n1,nausea\n".as_bytes(), &vocab).is_err());
    }
}
