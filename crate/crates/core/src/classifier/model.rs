use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::split::{Role, TrainSplit};
use super::svm::{fit_sigmoid, median_gamma, train_machine, Kernel, KernelMachine, Sigmoid, SolverOptions};
use super::Scorer;
use crate::features::{Feature, FeatureVector};
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "cohort-svm/1";

/// The nine classifier inputs.
pub const DEFAULT_FEATURES: [Feature; 9] = [
    Feature::PersonalCount,
    Feature::TagNoun,
    Feature::SisNoise,
    Feature::SisSignal,
    Feature::BigramsNoise,
    Feature::IsEnglish,
    Feature::CommonNoise,
    Feature::CommonSignal,
    Feature::NCharacters,
];

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub tweet_id: u64,
    pub features: FeatureVector,
    pub signal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub features: Vec<Feature>,
    /// Fixed RBF width; `None` derives it from the median distance.
    pub gamma: Option<f64>,
    /// Multiplier applied to the derived width.
    pub gamma_scale: f64,
    pub solver: SolverOptions,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            features: DEFAULT_FEATURES.to_vec(),
            gamma: None,
            gamma_scale: 1.0,
            solver: SolverOptions::default(),
        }
    }
}

/// Per-feature `(x - mean) / sd` with train-split moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl Standardization {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let dims = rows.first().map_or(0, Vec::len);
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dims];
        let mut sd = vec![0.0; dims];
        for d in 0..dims {
            mean[d] = rows.iter().map(|r| r[d]).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r[d] - mean[d]).powi(2)).sum::<f64>() / n;
            // a constant column carries no information; keep it centred
            sd[d] = if var > 0.0 { var.sqrt() } else { 1.0 };
        }
        Standardization { mean, sd }
    }

    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.sd))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub format: String,
    pub features: Vec<Feature>,
    pub standardization: Standardization,
    pub cost: f64,
    pub machine: KernelMachine,
    pub calibration: Sigmoid,
    pub split: TrainSplit,
    /// Checksum of the statistics bundle the features were extracted with.
    pub stats_checksum: Option<String>,
}

fn feature_row(ex: &Example, features: &[Feature]) -> Result<Vec<f64>> {
    let row = ex.features.select(features);
    if let Some((f, _)) = features.iter().zip(&row).find(|(_, x)| !x.is_finite()) {
        return Err(Error::Training(format!("tweet {}: feature `{f}` is not finite", ex.tweet_id)));
    }
    Ok(row)
}

impl SvmModel {
    /// Trains on the examples assigned to the train split.
    pub fn train(examples: &[Example], split: &TrainSplit, config: &TrainConfig) -> Result<Self> {
        let train: Vec<&Example> = examples
            .iter()
            .filter(|e| split.role(e.tweet_id) == Some(Role::Train))
            .collect();
        let mut model = Self::fit(&train, config)?;
        model.split = split.clone();
        Ok(model)
    }

    /// Trains on every given example.
    pub fn fit(train: &[&Example], config: &TrainConfig) -> Result<Self> {
        if config.features.is_empty() {
            return Err(Error::Training("no features selected".into()));
        }
        let raw: Vec<Vec<f64>> = train
            .iter()
            .map(|e| feature_row(e, &config.features))
            .collect::<Result<_>>()?;
        let labels: Vec<bool> = train.iter().map(|e| e.signal).collect();
        let standardization = Standardization::fit(&raw);
        let points: Vec<Vec<f64>> = raw.iter().map(|r| standardization.apply(r)).collect();
        let gamma = match config.gamma {
            Some(g) => g,
            None => median_gamma(&points)? * config.gamma_scale,
        };
        let kernel = Kernel::Rbf { gamma };
        let machine = train_machine(&points, &labels, kernel, &config.solver)?;
        let decisions: Vec<f64> = points.iter().map(|p| machine.decision(p)).collect();
        let calibration = fit_sigmoid(&decisions, &labels)?;
        if !(calibration.a < 0.0) {
            return Err(Error::Training(
                "calibration does not increase with the decision value; the classes are not separated".into(),
            ));
        }
        Ok(SvmModel {
            format: MODEL_FORMAT.to_string(),
            features: config.features.clone(),
            standardization,
            cost: config.solver.cost,
            machine,
            calibration,
            split: TrainSplit {
                seed: 0,
                train: train.iter().map(|e| e.tweet_id).collect(),
                test: Vec::new(),
                validation: Vec::new(),
            },
            stats_checksum: None,
        })
    }

    fn row(&self, v: &FeatureVector) -> Result<Vec<f64>> {
        let row = v.select(&self.features);
        for (f, x) in self.features.iter().zip(&row) {
            if x.is_nan() {
                return Err(Error::MissingFeature(f.name().into()));
            }
            if !x.is_finite() {
                return Err(Error::invalid(format!("feature `{f}` is not finite")));
            }
        }
        Ok(row)
    }

    pub fn decision(&self, v: &FeatureVector) -> Result<f64> {
        let row = self.row(v)?;
        Ok(self.machine.decision(&self.standardization.apply(&row)))
    }

    /// Scores from a name-keyed record.
    pub fn score_named(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        let by_feature: HashMap<Feature, f64> = values
            .iter()
            .filter_map(|(k, v)| k.parse::<Feature>().ok().map(|f| (f, *v)))
            .collect();
        let mut v = FeatureVector {
            values: [f64::NAN; crate::features::N_FEATURES],
        };
        for f in &self.features {
            let x = by_feature.get(f).ok_or_else(|| Error::MissingFeature(f.name().into()))?;
            v.set(*f, *x);
        }
        self.score(&v)
    }

    /// Refuses features extracted with other statistics.
    pub fn check_stats(&self, checksum: &str) -> Result<()> {
        match &self.stats_checksum {
            Some(expected) if expected != checksum => Err(Error::ChecksumMismatch {
                what: "feature statistics bundle".into(),
                expected: expected.clone(),
                found: checksum.to_string(),
            }),
            _ => Ok(()),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = serde_json::to_vec_pretty(self).expect("model serializes");
        b.push(b'\n');
        b
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let model: SvmModel = serde_json::from_slice(&fs::read(path)?)?;
        if model.format != MODEL_FORMAT {
            return Err(Error::invalid(format!("unsupported model format `{}`", model.format)));
        }
        if model.standardization.sd.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::invalid("model has a non-positive standardization scale"));
        }
        Ok(model)
    }
}

impl Scorer for SvmModel {
    fn score(&self, v: &FeatureVector) -> Result<f64> {
        Ok(self.calibration.apply(self.decision(v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::SplitFractions;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Two blobs in (personalcount, tagnoun).
    fn blobs(n: usize, seed: u64, sep: f64) -> Vec<Example> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let signal = i % 2 == 0;
                let c = if signal { sep } else { 0.0 };
                let mut v = FeatureVector::default();
                v.set(Feature::PersonalCount, c + rng.random_range(-1.0..1.0));
                v.set(Feature::TagNoun, c + rng.random_range(-1.0..1.0));
                Example { tweet_id: i as u64, features: v, signal }
            })
            .collect()
    }

    fn config() -> TrainConfig {
        TrainConfig {
            features: vec![Feature::PersonalCount, Feature::TagNoun],
            ..TrainConfig::default()
        }
    }

    #[test]
    fn separable_scores() {
        let ex = blobs(60, 1, 3.0);
        let refs: Vec<&Example> = ex.iter().collect();
        let m = SvmModel::fit(&refs, &config()).unwrap();
        for e in &ex {
            let s = m.score(&e.features).unwrap();
            assert!((0.0..=1.0).contains(&s));
            assert_eq!(s > 0.5, e.signal, "{}", e.tweet_id);
        }
        assert!(m.machine.coef.iter().all(|c| c.abs() <= m.cost + 1e-12));
    }

    #[test]
    fn flipped_labels_mirror_the_score() {
        let ex = blobs(60, 2, 1.5);
        let flipped: Vec<Example> = ex.iter().map(|e| Example { signal: !e.signal, ..e.clone() }).collect();
        let mut cfg = config();
        cfg.solver.tolerance = 1e-9;
        let a = SvmModel::fit(&ex.iter().collect::<Vec<_>>(), &cfg).unwrap();
        let b = SvmModel::fit(&flipped.iter().collect::<Vec<_>>(), &cfg).unwrap();
        for e in &ex {
            let (sa, sb) = (a.score(&e.features).unwrap(), b.score(&e.features).unwrap());
            assert!((sa - (1.0 - sb)).abs() < 1e-4, "{sa} {sb}");
        }
    }

    #[test]
    fn affine_rescaling_leaves_scores_unchanged() {
        let ex = blobs(80, 3, 1.2);
        let scaled: Vec<Example> = ex
            .iter()
            .map(|e| {
                let mut v = e.features;
                v.set(Feature::PersonalCount, 7.5 * v[Feature::PersonalCount] - 3.0);
                v.set(Feature::TagNoun, 0.01 * v[Feature::TagNoun] + 100.0);
                Example { features: v, ..e.clone() }
            })
            .collect();
        let a = SvmModel::fit(&ex.iter().collect::<Vec<_>>(), &config()).unwrap();
        let b = SvmModel::fit(&scaled.iter().collect::<Vec<_>>(), &config()).unwrap();
        for (e, s) in ex.iter().zip(&scaled) {
            assert!((a.score(&e.features).unwrap() - b.score(&s.features).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn save_load_and_refusals() {
        let ex = blobs(40, 4, 2.0);
        let split = TrainSplit::new(
            &ex.iter().map(|e| (e.tweet_id, e.signal)).collect::<Vec<_>>(),
            &SplitFractions::default(),
            7,
        )
        .unwrap();
        let mut m = SvmModel::train(&ex, &split, &config()).unwrap();
        m.stats_checksum = Some("abc".into());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        m.save(&path).unwrap();
        let back = SvmModel::load(&path).unwrap();
        for e in &ex {
            assert_eq!(back.score(&e.features).unwrap(), m.score(&e.features).unwrap());
        }
        assert!(back.check_stats("abc").is_ok());
        assert!(matches!(back.check_stats("abd"), Err(Error::ChecksumMismatch { .. })));

        let named: BTreeMap<String, f64> = [("personalcount".to_string(), 1.0)].into();
        match m.score_named(&named) {
            Err(Error::MissingFeature(f)) => assert_eq!(f, "tagnoun"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_finite_training_row_names_the_tweet() {
        let mut ex = blobs(20, 5, 2.0);
        ex[3].features.set(Feature::TagNoun, f64::INFINITY);
        let err = SvmModel::fit(&ex.iter().collect::<Vec<_>>(), &config()).unwrap_err();
        assert!(err.to_string().contains("tweet 3"), "{err}");
    }

    #[test]
    fn scores_stay_in_unit_interval() {
        let ex = blobs(60, 6, 2.0);
        let m = SvmModel::fit(&ex.iter().collect::<Vec<_>>(), &config()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100_000 {
            let mut v = FeatureVector::default();
            v.set(Feature::PersonalCount, rng.random_range(-1e3..1e3));
            v.set(Feature::TagNoun, rng.random_range(-1e3..1e3));
            let s = m.score(&v).unwrap();
            assert!((0.0..=1.0).contains(&s));
        }
    }
}
