//! Histogram separation between the signal and noise distributions of a
//! feature: `1/2 * sum_i (s_i - b_i)^2 / (s_i + b_i)` over unit-normalized
//! histograms, 0 for identical shapes and 1 for disjoint supports.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binning {
    /// Equal-width bins over the pooled range.
    #[default]
    Uniform,
    /// Bin edges at pooled-sample quantiles.
    Quantile,
}

fn check(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain(format!("separation_power: {what} sample is empty")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!("separation_power: {what} sample has non-finite values")));
    }
    Ok(())
}

pub fn separation_power(signal: &[f64], noise: &[f64], nbins: usize, binning: Binning) -> Result<f64> {
    check(signal, "signal")?;
    check(noise, "noise")?;
    if nbins < 2 {
        return Err(Error::domain("separation_power: need at least two bins"));
    }
    let bin_of: Box<dyn Fn(f64) -> usize> = match binning {
        Binning::Uniform => {
            let pooled = signal.iter().chain(noise);
            let lo = pooled.clone().copied().fold(f64::INFINITY, f64::min);
            let hi = pooled.copied().fold(f64::NEG_INFINITY, f64::max);
            if hi == lo {
                return Ok(0.0);
            }
            let width = (hi - lo) / nbins as f64;
            Box::new(move |x| (((x - lo) / width) as usize).min(nbins - 1))
        }
        Binning::Quantile => {
            let mut pooled: Vec<f64> = signal.iter().chain(noise).copied().collect();
            pooled.sort_by(f64::total_cmp);
            let n = pooled.len();
            let mut edges: Vec<f64> = (1..nbins).map(|k| pooled[(k * n / nbins).min(n - 1)]).collect();
            edges.dedup();
            Box::new(move |x| edges.partition_point(|&e| e <= x))
        }
    };
    let mut s = vec![0.0; nbins];
    let mut b = vec![0.0; nbins];
    for &x in signal {
        s[bin_of(x)] += 1.0;
    }
    for &x in noise {
        b[bin_of(x)] += 1.0;
    }
    let (ns, nb) = (signal.len() as f64, noise.len() as f64);
    let sum: f64 = s
        .iter()
        .zip(&b)
        .filter(|(si, bi)| **si + **bi > 0.0)
        .map(|(si, bi)| {
            let (ps, pb) = (si / ns, bi / nb);
            (ps - pb).powi(2) / (ps + pb)
        })
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}
