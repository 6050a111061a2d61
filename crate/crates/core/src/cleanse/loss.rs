//! Bounds on how many signal tweets a cleansing rule can discard.
//!
//! A rule group is justified by annotating a few random samples of the tweets
//! it would remove and finding no signal. Given the signal rate measured
//! elsewhere, the expected count in a sample of the same size is Poisson, and
//! the chance of observing the actual count is bounded by the upper normal
//! tail of `z = (expected - observed) / (sigma / sqrt(samples))`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossEstimate {
    pub expected: f64,
    pub sigma: f64,
    pub n_samples: u32,
    pub z: f64,
    pub prob: f64,
}

/// `P(Z > z)` for a standard normal `Z`.
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// Scales a Poisson count found in `n_found_in` tweets to a sample of
/// `n_target` tweets. Returns `(expected, sigma)` with `sigma = sqrt(expected)`.
pub fn poisson_scale(found: u64, n_found_in: u64, n_target: u64) -> Result<(f64, f64)> {
    if n_found_in == 0 {
        return Err(Error::domain("poisson_scale: reference sample is empty"));
    }
    let expected = found as f64 * n_target as f64 / n_found_in as f64;
    Ok((expected, expected.sqrt()))
}

pub fn loss_probability(expected: f64, sigma: f64, n_samples: u32, observed: f64) -> Result<LossEstimate> {
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("loss_probability: sigma must be positive, got {sigma}")));
    }
    if n_samples == 0 {
        return Err(Error::domain("loss_probability: need at least one sample"));
    }
    let z = (expected - observed) / (sigma / f64::from(n_samples).sqrt());
    Ok(LossEstimate {
        expected,
        sigma,
        n_samples,
        z,
        prob: normal_upper_tail(z),
    })
}

/// Annotation evidence behind one rule group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossEvidence {
    pub group: String,
    pub expected: f64,
    pub sigma: f64,
    pub n_samples: u32,
    pub observed: f64,
}

impl LossEvidence {
    pub fn estimate(&self) -> Result<LossEstimate> {
        loss_probability(self.expected, self.sigma, self.n_samples, self.observed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossReport {
    pub group: String,
    pub observed: f64,
    #[serde(flatten)]
    pub estimate: LossEstimate,
}

/// Evidence for the two annotated rule groups of the bundled rule file.
///
/// - `http`/`news`/`buy`: 24 signal tweets per 500 scale to 140-tweet
///   samples; three such samples held no signal.
/// - the sales and foreign function-word list: an expectation of 10.0 ± 3.2
///   per 150-tweet sample, two samples with no signal.
pub fn default_loss_evidence() -> Vec<LossEvidence> {
    let (expected, sigma) = poisson_scale(24, 500, 140).expect("non-empty reference");
    vec![
        LossEvidence {
            group: "http news buy".into(),
            expected,
            sigma,
            n_samples: 3,
            observed: 0.0,
        },
        LossEvidence {
            group: "free buy de e za que en lek la obat da majka molim hitno mil africa".into(),
            expected: 10.0,
            sigma: 3.2,
            n_samples: 2,
            observed: 0.0,
        },
    ]
}

pub fn loss_report(evidence: &[LossEvidence]) -> Result<Vec<LossReport>> {
    evidence
        .iter()
        .map(|e| {
            Ok(LossReport {
                group: e.group.clone(),
                observed: e.observed,
                estimate: e.estimate()?,
            })
        })
        .collect()
}
