//! Efficiency curves, the operating threshold and two-sample comparison.
//!
//! A tweet is kept when its score is strictly greater than the threshold.

use std::io::Write;

use serde::Serialize;

use super::{Example, Scorer};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub signal_efficiency: f64,
    pub noise_rejection: f64,
    pub signal_sigma: f64,
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub n_signal: usize,
    pub n_noise: usize,
    /// Ordered by rising threshold.
    pub points: Vec<RocPoint>,
}

/// `sqrt(p (1 - p) / n)`.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Fraction of scores above the threshold.
pub fn kept_fraction(scores: &[f64], threshold: f64) -> f64 {
    scores.iter().filter(|&&s| s > threshold).count() as f64 / scores.len() as f64
}

fn check_scores(scores: &[f64], what: &str) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::domain(format!("no {what} scores")));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::domain(format!("non-finite {what} score")));
    }
    Ok(())
}

/// Thresholds: `nthresholds` evenly spaced over the pooled score range,
/// every observed score, and one just below the minimum.
fn thresholds(pooled: &[f64], nthresholds: usize) -> Vec<f64> {
    let lo = pooled.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = pooled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut t: Vec<f64> = pooled.to_vec();
    t.push(lo.next_down());
    if nthresholds >= 2 {
        t.extend((0..nthresholds).map(|k| lo + (hi - lo) * k as f64 / (nthresholds - 1) as f64));
    }
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

pub fn roc_from_scores(signal: &[f64], noise: &[f64], nthresholds: usize) -> Result<RocCurve> {
    check_scores(signal, "signal")?;
    check_scores(noise, "noise")?;
    let pooled: Vec<f64> = signal.iter().chain(noise).copied().collect();
    let points = thresholds(&pooled, nthresholds)
        .into_iter()
        .map(|t| {
            let eff = kept_fraction(signal, t);
            let rej = 1.0 - kept_fraction(noise, t);
            RocPoint {
                threshold: t,
                signal_efficiency: eff,
                noise_rejection: rej,
                signal_sigma: binomial_sigma(eff, signal.len()),
                noise_sigma: binomial_sigma(rej, noise.len()),
            }
        })
        .collect();
    Ok(RocCurve {
        n_signal: signal.len(),
        n_noise: noise.len(),
        points,
    })
}

/// Scores split by class.
pub fn class_scores<S: Scorer + ?Sized>(scorer: &S, sample: &[Example]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut signal = Vec::new();
    let mut noise = Vec::new();
    for e in sample {
        let s = scorer.score(&e.features)?;
        if e.signal {
            signal.push(s);
        } else {
            noise.push(s);
        }
    }
    Ok((signal, noise))
}

pub fn roc<S: Scorer + ?Sized>(scorer: &S, test: &[Example], nthresholds: usize) -> Result<RocCurve> {
    let (signal, noise) = class_scores(scorer, test)?;
    roc_from_scores(&signal, &noise, nthresholds)
}

impl RocCurve {
    /// Best noise rejection among points keeping at least `efficiency`.
    pub fn rejection_at(&self, efficiency: f64) -> f64 {
        self.points
            .iter()
            .filter(|p| p.signal_efficiency >= efficiency)
            .map(|p| p.noise_rejection)
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Largest threshold that keeps at least `target` of the signal scores.
///
/// With `need = ceil(target * n)`, this is the largest observed score below
/// the `need`-th highest one, or just below the minimum when none is.
pub fn pick_threshold(signal: &[f64], target: f64) -> Result<f64> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::domain(format!("target efficiency {target} is outside (0, 1]")));
    }
    check_scores(signal, "signal")?;
    let mut sorted = signal.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let n = sorted.len();
    // guard against 0.9 * 20 landing a hair above 18
    let need = ((target * n as f64) - 1e-9).ceil().max(1.0) as usize;
    let pivot = sorted[need - 1];
    Ok(sorted
        .iter()
        .copied()
        .find(|&s| s < pivot)
        .unwrap_or_else(|| pivot.next_down()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonPoint {
    pub threshold: f64,
    /// Efficiency difference over its pooled binomial uncertainty.
    pub signal_pull: f64,
    pub noise_pull: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub points: Vec<ComparisonPoint>,
    pub flagged: usize,
    pub max_abs_pull: f64,
}

pub const FLAG_SIGMAS: f64 = 3.0;

/// Two-proportion pull `(pa - pb) / sqrt(p (1 - p) (1/na + 1/nb))` with the
/// pooled `p`.
fn pull(a: &[f64], b: &[f64], t: f64) -> f64 {
    let (ka, kb) = (
        a.iter().filter(|&&s| s > t).count() as f64,
        b.iter().filter(|&&s| s > t).count() as f64,
    );
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let diff = ka / na - kb / nb;
    if diff == 0.0 {
        return 0.0;
    }
    let p = (ka + kb) / (na + nb);
    let sigma = (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt();
    diff / sigma
}

pub fn compare_scores(
    a: (&[f64], &[f64]),
    b: (&[f64], &[f64]),
    nthresholds: usize,
) -> Result<Comparison> {
    for (s, what) in [(a.0, "first signal"), (a.1, "first noise"), (b.0, "second signal"), (b.1, "second noise")] {
        check_scores(s, what)?;
    }
    let pooled: Vec<f64> = a.0.iter().chain(a.1).chain(b.0).chain(b.1).copied().collect();
    let lo = pooled.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = pooled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let steps = nthresholds.max(2);
    let points: Vec<ComparisonPoint> = (0..steps)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
            ComparisonPoint {
                threshold: t,
                signal_pull: pull(a.0, b.0, t),
                noise_pull: pull(a.1, b.1, t),
            }
        })
        .collect();
    let flagged = points
        .iter()
        .filter(|p| p.signal_pull.abs() > FLAG_SIGMAS || p.noise_pull.abs() > FLAG_SIGMAS)
        .count();
    let max_abs_pull = points
        .iter()
        .map(|p| p.signal_pull.abs().max(p.noise_pull.abs()))
        .fold(0.0, f64::max);
    Ok(Comparison {
        points,
        flagged,
        max_abs_pull,
    })
}

pub fn compare_testing_samples<S: Scorer + ?Sized>(
    scorer: &S,
    first: &[Example],
    second: &[Example],
    nthresholds: usize,
) -> Result<Comparison> {
    let (sa, na) = class_scores(scorer, first)?;
    let (sb, nb) = class_scores(scorer, second)?;
    compare_scores((&sa, &na), (&sb, &nb), nthresholds)
}
