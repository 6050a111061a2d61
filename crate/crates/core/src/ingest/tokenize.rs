//! Tweet tokenization and lexeme stemming.
//!
//! Tokens are lowercase alphanumeric runs. An apostrophe, hyphen or period is
//! kept only when it sits between two alphanumerics, so `anti-hiv`, `don't`,
//! `bit.ly` and `t.co` survive as single tokens while `#hiv` and `@user`
//! reduce to `hiv` and `user`. `/` always separates, which splits URLs into
//! their host and path parts.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};

/// Identifier of the stemmer variant, recorded in artifact metadata.
pub const STEMMER_ID: &str = "snowball-english-porter2";

fn stemmer() -> &'static Stemmer {
    static STEMMER: OnceLock<Stemmer> = OnceLock::new();
    STEMMER.get_or_init(|| Stemmer::create(Algorithm::English))
}

/// Stems one lowercase token.
///
/// Host-like tokens (containing a period) and tokens with digits are kept
/// verbatim, so `bit.ly` and `3tc` index as themselves.
pub fn stem(token: &str) -> String {
    if token.contains('.') || token.chars().any(|c| c.is_numeric()) {
        token.to_string()
    } else {
        stemmer().stem(token).into_owned()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexemeList {
    pub tokens: Vec<String>,
    pub lexemes: BTreeSet<String>,
    pub ncharacters: usize,
}

impl LexemeList {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Stemmed form of every token, in token order (with repeats).
    pub fn stems(&self) -> impl Iterator<Item = String> + '_ {
        self.tokens.iter().map(|t| stem(t))
    }
}

fn is_connector(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '.')
}

/// Splits text into lowercase tokens.
pub fn split_tokens(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().flat_map(char::to_lowercase).collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            current.push(c);
            continue;
        }
        let joins = is_connector(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
            && chars[i - 1].is_alphanumeric();
        if joins {
            current.push(if c == '\u{2019}' { '\'' } else { c });
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

pub fn tokenize(text: &str) -> LexemeList {
    let tokens = split_tokens(text);
    let lexemes = tokens.iter().map(|t| stem(t)).collect();
    LexemeList {
        tokens,
        lexemes,
        ncharacters: text.chars().count(),
    }
}
