//! Helpers for driving the `cohort-miner` binary from integration tests.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const FIXTURE_FILES: [&str; 4] = ["tweets.jsonl", "annotations.jsonl", "effects.csv", "truth.csv"];

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synth-1k")
}

/// Runs the binary with `dir` as data directory.
pub fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohort-miner"))
        .arg("--data-dir")
        .arg(dir)
        .args(args)
        .env_remove("COHORT_MINER_DATA")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

pub fn run_ok(dir: &Path, args: &[&str]) {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Every stage from raw tweets to the analytics outputs, on the bundled
/// fixture copied into `dir/fx`.
pub fn run_pipeline(dir: &Path) {
    let fx = dir.join("fx");
    fs::create_dir_all(&fx).unwrap();
    for f in FIXTURE_FILES {
        fs::copy(fixture_dir().join(f), fx.join(f)).unwrap();
    }
    let steps: &[&[&str]] = &[
        &["ingest", "fx/tweets.jsonl", "-o", "corpus.jsonl", "--frequency", "freq.csv", "--index", "index.tsv", "--rejects", "rejects.csv"],
        &["cleanse", "corpus.jsonl", "clean.jsonl", "--loss-report", "loss.csv"],
        &["export-labels", "--tasks", "clean.jsonl", "--log", "fx/annotations.jsonl", "-o", "labels.jsonl"],
        &["features", "build-stats", "--labels", "labels.jsonl", "-o", "stats.json"],
        &["features", "extract", "labels.jsonl", "--stats", "stats.json", "-o", "labeled-features.csv"],
        &["langfilter", "--features", "labeled-features.csv", "-o", "english.csv", "--labels", "labels.jsonl", "--report", "yields.csv"],
        &["train", "--features", "english.csv", "--labels", "labels.jsonl", "-o", "model.json"],
        &["roc", "--model", "model.json", "--features", "english.csv", "--labels", "labels.jsonl", "-o", "roc.csv", "--threshold-out", "threshold.json", "--compare-out", "compare.csv"],
        &["features", "extract", "clean.jsonl", "--stats", "stats.json", "-o", "features.csv"],
        &["langfilter", "--features", "features.csv", "-o", "features-english.csv"],
        &["score", "--model", "model.json", "--features", "features-english.csv", "-o", "scores.csv"],
        &["analyze", "mentions", "--labels", "labels.jsonl", "--effects", "fx/effects.csv", "-o", "mentions.csv"],
        &["analyze", "effects", "--labels", "labels.jsonl", "--effects", "fx/effects.csv", "-o", "pairs.csv", "--totals", "totals.csv"],
        &["analyze", "sentiment", "--labels", "labels.jsonl", "--effects", "fx/effects.csv", "-o", "sentiment.csv", "--neutrality", "neutrality.csv"],
        &["analyze", "sentiment", "--labels", "labels.jsonl", "--drug", "Atripla", "--unique-users", "-o", "sentiment-atripla.csv"],
        &["analyze", "correlation", "--labels", "labels.jsonl", "--effects", "fx/effects.csv", "--exclude-retweets", "-o", "correlation.json"],
    ];
    for step in steps {
        run_ok(dir, step);
    }
}

/// Relative path and contents of every file under `root`, sorted by path.
pub fn tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out.sort();
    out
}
