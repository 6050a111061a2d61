use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ingest::{stem, tokenize, LexemeList, TweetRecord};
use crate::{Error, Result};

/// The bundled rule file.
pub const DEFAULT_RULES: &str = include_str!("../../data/default.rules");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    ContainsToken,
    StartsWith,
    UserLangNotEnglish,
    ContainsAnyOfList,
}

impl RuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::ContainsToken => "contains_token",
            RuleKind::StartsWith => "starts_with",
            RuleKind::UserLangNotEnglish => "user_lang_not_english",
            RuleKind::ContainsAnyOfList => "contains_any_of_list",
        }
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "contains_token" => RuleKind::ContainsToken,
            "starts_with" => RuleKind::StartsWith,
            "user_lang_not_english" => RuleKind::UserLangNotEnglish,
            "contains_any_of_list" => RuleKind::ContainsAnyOfList,
            other => return Err(Error::invalid(format!("unknown rule kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanseRule {
    pub stage: u32,
    pub kind: RuleKind,
    /// Lowercase words as written in the rule file.
    pub payload: Vec<String>,
    stems: Vec<String>,
}

impl CleanseRule {
    pub fn new(stage: u32, kind: RuleKind, payload: Vec<String>) -> Result<Self> {
        let arity_ok = match kind {
            RuleKind::ContainsToken | RuleKind::StartsWith => payload.len() == 1,
            RuleKind::UserLangNotEnglish => payload.is_empty(),
            RuleKind::ContainsAnyOfList => !payload.is_empty(),
        };
        if !arity_ok {
            return Err(Error::invalid(format!(
                "rule {stage}: `{}` does not take {} payload word(s)",
                kind.as_str(),
                payload.len()
            )));
        }
        let payload: Vec<String> = payload.into_iter().map(|p| p.to_lowercase()).collect();
        let stems = payload.iter().map(|p| stem(p)).collect();
        Ok(CleanseRule {
            stage,
            kind,
            payload,
            stems,
        })
    }

    pub fn matches(&self, rec: &TweetRecord, lex: &LexemeList) -> bool {
        match self.kind {
            RuleKind::ContainsToken | RuleKind::ContainsAnyOfList => {
                self.stems.iter().any(|s| lex.lexemes.contains(s))
            }
            RuleKind::StartsWith => lex
                .tokens
                .first()
                .is_some_and(|first| stem(first) == self.stems[0]),
            RuleKind::UserLangNotEnglish => {
                !rec.user_lang.trim().to_lowercase().starts_with("en")
            }
        }
    }
}

impl fmt::Display for CleanseRule {
    /// The canonical rule-file line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.stage, self.kind.as_str())?;
        for p in &self.payload {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// Parses a rule file: one `stage kind payload...` rule per line, `#`
/// starting a comment. Stages must be strictly increasing.
pub fn parse_rules(text: &str) -> Result<Vec<CleanseRule>> {
    let mut rules: Vec<CleanseRule> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let stage: u32 = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| Error::invalid(format!("rules line {}: bad stage", i + 1)))?;
        let kind: RuleKind = parts
            .next()
            .ok_or_else(|| Error::invalid(format!("rules line {}: missing kind", i + 1)))?
            .parse()?;
        let rule = CleanseRule::new(stage, kind, parts.map(str::to_string).collect())?;
        if let Some(prev) = rules.last() {
            if rule.stage <= prev.stage {
                return Err(Error::invalid(format!(
                    "rules line {}: stage {} does not follow stage {}",
                    i + 1,
                    rule.stage,
                    prev.stage
                )));
            }
        }
        rules.push(rule);
    }
    Ok(rules)
}

pub fn default_rules() -> Vec<CleanseRule> {
    parse_rules(DEFAULT_RULES).expect("bundled rules parse")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCount {
    pub rule: String,
    pub removed_count: u64,
}

#[derive(Debug, Clone, Default)]
pub struct CleanseOutcome {
    pub kept: Vec<TweetRecord>,
    /// `(tweet_id, index of the removing rule)`.
    pub removed: Vec<(u64, usize)>,
    pub counts: Vec<RuleCount>,
}

/// Index of the first rule matching the record.
pub fn first_match(rec: &TweetRecord, rules: &[CleanseRule]) -> Option<usize> {
    let lex = tokenize(&rec.text);
    rules.iter().position(|r| r.matches(rec, &lex))
}

pub fn apply_rules(corpus: &[TweetRecord], rules: &[CleanseRule]) -> CleanseOutcome {
    let mut out = CleanseOutcome {
        counts: rules
            .iter()
            .map(|r| RuleCount {
                rule: r.to_string(),
                removed_count: 0,
            })
            .collect(),
        ..CleanseOutcome::default()
    };
    for rec in corpus {
        match first_match(rec, rules) {
            Some(i) => {
                out.counts[i].removed_count += 1;
                out.removed.push((rec.tweet_id, i));
            }
            None => out.kept.push(rec.clone()),
        }
    }
    out
}
