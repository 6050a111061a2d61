//! Kernel SVM classifier over feature vectors, its calibrated score and the
//! efficiency curves used to pick an operating threshold.

mod model;
mod roc;
mod split;
mod svm;

use serde::Serialize;

use crate::features::FeatureVector;
use crate::Result;

pub use model::{Example, Standardization, SvmModel, TrainConfig, DEFAULT_FEATURES, MODEL_FORMAT};
pub use roc::{
    binomial_sigma, class_scores, compare_scores, compare_testing_samples, kept_fraction,
    pick_threshold, roc, roc_from_scores, Comparison, ComparisonPoint, RocCurve, RocPoint,
    FLAG_SIGMAS,
};
pub use split::{Role, SplitFractions, TrainSplit};
pub use svm::{
    fit_sigmoid, median_gamma, solve_dual, train_machine, DualSolution, Kernel, KernelMachine,
    Sigmoid, SolverOptions,
};

/// Anything that maps a feature vector to a signal-likeness in `[0, 1]`.
pub trait Scorer {
    fn score(&self, v: &FeatureVector) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub gamma_scale: f64,
    pub cost: f64,
    /// Validation noise rejection at the 90% signal threshold.
    pub rejection: f64,
}

pub const OPERATING_EFFICIENCY: f64 = 0.9;

/// Trains one model per `(gamma_scale, cost)` pair and ranks them by
/// validation noise rejection at the operating efficiency. Returns the
/// winning configuration (first on ties) and the full table.
pub fn grid_search(
    examples: &[Example],
    split: &TrainSplit,
    base: &TrainConfig,
    gamma_scales: &[f64],
    costs: &[f64],
) -> Result<(TrainConfig, Vec<GridPoint>)> {
    let validation: Vec<Example> = examples
        .iter()
        .filter(|e| split.role(e.tweet_id) == Some(Role::Validation))
        .cloned()
        .collect();
    let mut table = Vec::new();
    let mut best: Option<(f64, TrainConfig)> = None;
    for &gamma_scale in gamma_scales {
        for &cost in costs {
            let mut config = base.clone();
            config.gamma = None;
            config.gamma_scale = gamma_scale;
            config.solver.cost = cost;
            let model = SvmModel::train(examples, split, &config)?;
            let (signal, noise) = class_scores(&model, &validation)?;
            let t = pick_threshold(&signal, OPERATING_EFFICIENCY)?;
            let rejection = if noise.is_empty() { 0.0 } else { 1.0 - kept_fraction(&noise, t) };
            table.push(GridPoint {
                gamma_scale,
                cost,
                rejection,
            });
            if best.as_ref().is_none_or(|(r, _)| rejection > *r) {
                best = Some((rejection, config));
            }
        }
    }
    let (_, config) = best.ok_or_else(|| crate::Error::invalid("empty hyperparameter grid"))?;
    Ok((config, table))
}
