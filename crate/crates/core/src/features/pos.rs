//! Deterministic lexicon + suffix-rule part-of-speech tagger.
//!
//! Lookup order: lexicon, then digits-only tokens (`Other`), then the
//! ordered suffix rules, then the `Noun` default. Suffix rules need at least
//! three characters of stem so that `bed` or `king` fall through to nouns.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::wordlists::list_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Prep,
    Conj,
    Determiner,
    To,
    Other,
}

const PREPOSITIONS: &[&str] = &[
    "about", "above", "across", "after", "against", "along", "among", "around", "as", "at",
    "before", "behind", "below", "beneath", "beside", "between", "beyond", "by", "despite",
    "down", "during", "except", "for", "from", "in", "inside", "into", "like", "near", "of",
    "off", "on", "onto", "out", "outside", "over", "past", "per", "since", "than", "through",
    "throughout", "toward", "towards", "under", "underneath", "until", "till", "up", "upon",
    "via", "with", "within", "without",
];

const CONJUNCTIONS: &[&str] = &[
    "and", "or", "but", "nor", "yet", "because", "although", "though", "while", "whereas",
    "if", "unless", "whether", "cuz", "cause", "coz", "plus", "&",
];

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no",
    "all", "both", "either", "neither", "many", "much", "few", "several", "another", "other",
    "such", "what", "which", "whatever", "whichever",
];

/// Pronouns and interjections: tagged `Other`.
const OTHERS: &[&str] = &[
    "i", "me", "my", "mine", "myself", "im", "ive", "ill", "id", "you", "your", "yours", "yourself",
    "youre", "youll", "youve", "he", "him", "his", "himself", "she", "her", "hers", "herself",
    "it", "its", "itself", "we", "us", "our", "ours", "ourselves", "they", "them", "their",
    "theirs", "themselves", "who", "whom", "whose", "someone", "somebody", "something",
    "anyone", "anybody", "anything", "everyone", "everybody", "everything", "nobody", "nothing",
    "none", "lol", "omg", "wow", "yes", "yeah", "ok", "okay", "oh", "hey", "please", "thanks",
    "rt",
];

const VERBS: &[&str] = &[
    "is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do", "does",
    "did", "done", "will", "would", "can", "could", "shall", "should", "may", "might", "must",
    "ought", "get", "gets", "got", "gotten", "go", "goes", "went", "gone", "make", "makes",
    "made", "take", "takes", "took", "taken", "give", "gave", "given", "know", "knew", "known",
    "think", "thought", "say", "says", "said", "see", "saw", "seen", "come", "came", "feel",
    "felt", "keep", "kept", "let", "put", "tell", "told", "find", "found", "need", "want",
    "start", "stop", "hate", "love", "hope", "help", "sleep", "slept", "dream", "dreamt",
    "eat", "ate", "quit", "miss", "switch", "cure", "prevent", "approve", "buy", "bought",
    "sell", "sold", "pay", "paid", "cost", "win", "won", "lose", "lost", "begin", "began",
    "become", "became", "leave", "left", "hurt", "wake", "woke", "forget", "forgot", "gonna",
    "wanna", "gotta", "dont", "doesnt", "didnt", "cant", "couldnt", "shouldnt", "wouldnt",
    "wont", "isnt", "arent", "wasnt", "werent", "havent", "hasnt", "hadnt", "aint",
];

const ADJECTIVES: &[&str] = &[
    "good", "bad", "new", "old", "great", "big", "small", "little", "high", "low", "long",
    "short", "sick", "ill", "well", "tired", "weird", "crazy", "vivid", "free", "cheap", "first",
    "last", "next", "best", "worst", "better", "worse", "same", "different", "generic", "hiv",
    "positive", "negative", "undetectable", "happy", "sad", "sure", "real", "hard", "easy",
    "strong", "weak", "full", "whole", "nice", "awful", "horrible", "terrible", "fine", "ready",
];

const ADVERBS: &[&str] = &[
    "not", "never", "always", "often", "sometimes", "still", "already", "just", "too", "also",
    "very", "so", "really", "now", "then", "soon", "again", "here", "there", "today", "tonight",
    "tomorrow", "yesterday", "ever", "almost", "only", "even", "maybe", "perhaps", "once", "back",
    "away", "ago", "yet", "why", "how", "when", "where", "nt", "rather", "quite",
];

/// Words ending in an adverb or adjective suffix that are usually nouns.
const NOUN_EXCEPTIONS: &[&str] = &[
    "family", "reply", "supply", "belly", "rally", "ally", "thing", "morning", "evening",
    "nothing", "something", "anything", "everything", "feeling", "meeting", "ring", "king",
    "spring", "wedding", "clinical", "trial", "hospital", "medical", "animal", "festival",
    "signal", "deal", "capital", "rival", "arrival", "approval", "disease", "news",
];

const SUFFIX_RULES: &[(&str, PosTag)] = &[
    ("ly", PosTag::Adv),
    ("ing", PosTag::Verb),
    ("ed", PosTag::Verb),
    ("ous", PosTag::Adj),
    ("ful", PosTag::Adj),
    ("ive", PosTag::Adj),
    ("al", PosTag::Adj),
    ("able", PosTag::Adj),
    ("ible", PosTag::Adj),
    ("less", PosTag::Adj),
    ("ic", PosTag::Adj),
];

const MIN_STEM: usize = 3;

#[derive(Debug, Clone)]
pub struct PosTagger {
    lexicon: HashMap<String, PosTag>,
    suffixes: Vec<(String, PosTag)>,
}

impl Default for PosTagger {
    fn default() -> Self {
        let mut lexicon = HashMap::new();
        // Later groups win, so the most specific assignments go last.
        let groups: [(&[&str], PosTag); 8] = [
            (NOUN_EXCEPTIONS, PosTag::Noun),
            (ADJECTIVES, PosTag::Adj),
            (VERBS, PosTag::Verb),
            (ADVERBS, PosTag::Adv),
            (PREPOSITIONS, PosTag::Prep),
            (CONJUNCTIONS, PosTag::Conj),
            (DETERMINERS, PosTag::Determiner),
            (OTHERS, PosTag::Other),
        ];
        for (words, tag) in groups {
            for w in words {
                lexicon.insert((*w).to_string(), tag);
            }
        }
        lexicon.insert("to".into(), PosTag::To);
        PosTagger {
            lexicon,
            suffixes: SUFFIX_RULES
                .iter()
                .map(|(s, t)| ((*s).to_string(), *t))
                .collect(),
        }
    }
}

impl PosTagger {
    pub fn tag(&self, token: &str) -> PosTag {
        let form = list_form(token);
        if let Some(&t) = self.lexicon.get(&form) {
            return t;
        }
        if !form.chars().any(char::is_alphabetic) {
            return PosTag::Other;
        }
        let nchars = form.chars().count();
        for (suffix, tag) in &self.suffixes {
            if form.ends_with(suffix.as_str()) && nchars >= suffix.len() + MIN_STEM {
                return *tag;
            }
        }
        // third-person `s` on a known verb stem
        if let Some(stem) = form.strip_suffix('s') {
            let stem = stem.strip_suffix("e").filter(|s| s.ends_with(['s', 'x', 'z', 'h'])).unwrap_or(stem);
            if self.lexicon.get(stem) == Some(&PosTag::Verb) {
                return PosTag::Verb;
            }
        }
        PosTag::Noun
    }

    pub fn tag_all<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<PosTag> {
        tokens.iter().map(|t| self.tag(t.as_ref())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_classes_and_defaults() {
        let t = PosTagger::default();
        assert_eq!(t.tag("to"), PosTag::To);
        assert_eq!(t.tag("the"), PosTag::Determiner);
        assert_eq!(t.tag("and"), PosTag::Conj);
        assert_eq!(t.tag("with"), PosTag::Prep);
        assert_eq!(t.tag("i"), PosTag::Other);
        assert_eq!(t.tag("i'm"), PosTag::Other);
        assert_eq!(t.tag("atripla"), PosTag::Noun);
        assert_eq!(t.tag("2012"), PosTag::Other);
    }

    #[test]
    fn suffix_rules() {
        let t = PosTagger::default();
        assert_eq!(t.tag("quickly"), PosTag::Adv);
        assert_eq!(t.tag("taking"), PosTag::Verb);
        assert_eq!(t.tag("started"), PosTag::Verb);
        assert_eq!(t.tag("famous"), PosTag::Adj);
        assert_eq!(t.tag("painful"), PosTag::Adj);
        assert_eq!(t.tag("effective"), PosTag::Adj);
        assert_eq!(t.tag("king"), PosTag::Noun);
        assert_eq!(t.tag("bed"), PosTag::Noun);
        assert_eq!(t.tag("family"), PosTag::Noun);
        assert_eq!(t.tag("hates"), PosTag::Verb);
        assert_eq!(t.tag("misses"), PosTag::Verb);
        assert_eq!(t.tag("drugs"), PosTag::Noun);
    }
}
