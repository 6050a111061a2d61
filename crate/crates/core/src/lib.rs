//! Mining first-person HIV-treatment posts from keyword-filtered tweets.
//!
//! The crate is organised as a sequence of stages, each usable on its own:
//!
//! - [`ingest`]: record parsing, tokenization into lexemes, the keyword gate
//!   and lexeme frequency tables.
//! - [`cleanse`]: rule-based noise removal and the Poisson/normal-tail bounds
//!   on how much signal a rule can discard.
//! - [`features`]: the 37 hand-crafted per-tweet features, the corpus
//!   statistics they depend on, and histogram separation power.
//! - [`langfilter`]: the four-threshold foreign-language cut.
//! - [`classifier`]: an RBF soft-margin SVM trained by SMO, sigmoid
//!   calibration, ROC sweeps and operating-threshold selection.
//! - [`annotate`]: a two-rater annotation pool with an append-only log.
//! - [`analytics`]: 60-day binned drug mentions, drug/effect pairs and
//!   sentiment sums.

pub mod analytics;
pub mod annotate;
pub mod checksum;
pub mod classifier;
pub mod cleanse;
pub mod error;
pub mod features;
pub mod ingest;
pub mod labels;
pub mod langfilter;
pub mod synth;

pub use error::{Error, Result};
