//! Record loading, tokenization and the keyword gate.

mod frequency;
mod index;
mod keywords;
mod record;
mod tokenize;

pub use frequency::{token_frequency, write_frequency_csv, FrequencyRow, FrequencyTable};
pub use index::LexemeIndex;
pub use keywords::{keyword_gate, KeywordSet, HIV_KEYWORD_TERMS};
pub use record::{
    parse_corpus, write_corpus, DateWindow, DuplicatePolicy, IngestConfig, InputFormat,
    ParseOutcome, Rejection, TweetRecord,
};
pub use tokenize::{split_tokens, stem, tokenize, LexemeList, STEMMER_ID};
