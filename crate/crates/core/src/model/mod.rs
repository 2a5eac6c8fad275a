//! The readability classifier: scaling, forward selection, L2 logistic
//! regression, cross-validated evaluation and the persisted model file.

pub mod cv;
pub mod evaluate;
pub mod logreg;
pub mod metrics;
pub mod scaler;
pub mod sfs;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vectorizer::{FeatureSelection, FeatureVector, FEATURE_COUNT, SCHEMA_VERSION};

pub use cv::stratified_cv;
pub use evaluate::{evaluate, EvaluationReport, FamilyResult};
pub use logreg::{sigmoid, train_logreg, LogisticFit};
pub use metrics::{accuracy, auc};
pub use scaler::ScalerParams;
pub use sfs::{sfs, SfsResult};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("no training data")]
    EmptyData,
    #[error("labels contain a single class; both 0 and 1 are required")]
    SingleClass,
    #[error("class {class} has {count} members, fewer than the {folds} folds requested")]
    ClassTooSmall { class: u8, count: usize, folds: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("schema version mismatch: model has `{model}`, input has `{input}`")]
    SchemaMismatch { model: String, input: String },
    #[error("invalid model file: {0}")]
    InvalidModel(String),
    #[error("model file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model file {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Hyperparameters shared by training and evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelSettings {
    pub lambda_l2: f64,
    pub inner_folds: usize,
    /// Upper bound on selected features; the family size when unset.
    pub k_max: Option<usize>,
    pub seed: u64,
}

impl Default for ModelSettings {
    fn default() -> Self {
        ModelSettings {
            lambda_l2: 1.0,
            inner_folds: 5,
            k_max: None,
            seed: 42,
        }
    }
}

impl ModelSettings {
    pub fn k_max_for(&self, selection: FeatureSelection) -> usize {
        self.k_max.unwrap_or_else(|| selection.columns().len())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Provenance {
    pub n_samples: usize,
    pub n_positive: usize,
    pub family: String,
    pub k_max: usize,
    pub inner_folds: usize,
    pub seed: u64,
    pub selection_path: Vec<usize>,
    pub selection_scores: Vec<f64>,
    /// Caller-supplied context such as the dictionary and feature settings.
    pub notes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityModel {
    pub schema_version: String,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub selected: Vec<usize>,
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub lambda_l2: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub probability: f64,
    pub linear_score: f64,
}

/// Largest double below 1.
const ONE_BELOW: f64 = 1.0 - f64::EPSILON / 2.0;

fn check_labels(vectors: &[FeatureVector], labels: &[u8]) -> Result<(), ModelError> {
    if vectors.is_empty() {
        return Err(ModelError::EmptyData);
    }
    if vectors.len() != labels.len() {
        return Err(ModelError::InvalidArgument(format!(
            "{} vectors but {} labels",
            vectors.len(),
            labels.len()
        )));
    }
    if let Some(bad) = labels.iter().find(|&&y| y > 1) {
        return Err(ModelError::InvalidArgument(format!("label {bad} is not 0 or 1")));
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    if positives == 0 || positives == labels.len() {
        return Err(ModelError::SingleClass);
    }
    for v in vectors {
        if v.schema_version != SCHEMA_VERSION || v.values.len() != FEATURE_COUNT {
            return Err(ModelError::SchemaMismatch {
                model: SCHEMA_VERSION.into(),
                input: format!("{} ({} values)", v.schema_version, v.values.len()),
            });
        }
    }
    Ok(())
}

pub(crate) fn rows(vectors: &[FeatureVector]) -> Vec<Vec<f64>> {
    vectors.iter().map(|v| v.values.clone()).collect()
}

pub(crate) fn subset(rows: &[Vec<f64>], idx: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| cols.iter().map(|&c| rows[i][c]).collect()).collect()
}

/// Fit the scaler, select features within `selection` and fit the final model.
pub fn train(
    vectors: &[FeatureVector],
    labels: &[u8],
    selection: FeatureSelection,
    settings: &ModelSettings,
) -> Result<ReadabilityModel, ModelError> {
    check_labels(vectors, labels)?;
    let raw = rows(vectors);
    let scaler = ScalerParams::fit(&raw)?;
    let scaled = scaler.transform(&raw);
    let k_max = settings.k_max_for(selection);
    let selection_result = sfs(
        &scaled,
        labels,
        &selection.columns(),
        k_max,
        settings.inner_folds,
        settings.seed,
        settings.lambda_l2,
    )?;
    let all: Vec<usize> = (0..scaled.len()).collect();
    let fit = train_logreg(&subset(&scaled, &all, &selection_result.selected), labels, settings.lambda_l2)?;
    Ok(ReadabilityModel {
        schema_version: SCHEMA_VERSION.to_string(),
        mu: scaler.mu,
        sigma: scaler.sigma,
        selected: selection_result.selected,
        weights: fit.weights,
        intercept: fit.intercept,
        lambda_l2: settings.lambda_l2,
        provenance: Provenance {
            n_samples: labels.len(),
            n_positive: labels.iter().filter(|&&y| y == 1).count(),
            family: selection.label().to_string(),
            k_max,
            inner_folds: settings.inner_folds,
            seed: settings.seed,
            selection_path: selection_result.path,
            selection_scores: selection_result.scores,
            notes: BTreeMap::new(),
        },
    })
}

impl ReadabilityModel {
    pub fn scaler(&self) -> ScalerParams {
        ScalerParams {
            mu: self.mu.clone(),
            sigma: self.sigma.clone(),
        }
    }

    /// Probability `sigmoid(w.x' + b)` and the intercept-free score `w.x'`.
    pub fn predict(&self, x: &FeatureVector) -> Result<Prediction, ModelError> {
        if x.schema_version != self.schema_version {
            return Err(ModelError::SchemaMismatch {
                model: self.schema_version.clone(),
                input: x.schema_version.clone(),
            });
        }
        if x.values.len() != self.mu.len() {
            return Err(ModelError::InvalidArgument(format!(
                "vector has {} values, model expects {}",
                x.values.len(),
                self.mu.len()
            )));
        }
        let linear_score: f64 = self
            .selected
            .iter()
            .zip(&self.weights)
            .map(|(&j, w)| (x.values[j] - self.mu[j]) / self.sigma[j] * w)
            .sum();
        // keep the probability strictly inside (0, 1)
        let probability = sigmoid(linear_score + self.intercept).clamp(f64::MIN_POSITIVE, ONE_BELOW);
        Ok(Prediction {
            probability,
            linear_score,
        })
    }

    /// Structural checks applied to every loaded model.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ModelError::SchemaMismatch {
                model: self.schema_version.clone(),
                input: SCHEMA_VERSION.to_string(),
            });
        }
        let bad = |m: String| Err(ModelError::InvalidModel(m));
        if self.mu.len() != FEATURE_COUNT || self.sigma.len() != FEATURE_COUNT {
            return bad(format!(
                "expected {FEATURE_COUNT} scaler entries, found mu={} sigma={}",
                self.mu.len(),
                self.sigma.len()
            ));
        }
        if self.weights.len() != self.selected.len() {
            return bad(format!(
                "{} weights for {} selected features",
                self.weights.len(),
                self.selected.len()
            ));
        }
        let mut seen = [false; FEATURE_COUNT];
        for &j in &self.selected {
            if j >= FEATURE_COUNT {
                return bad(format!("selected index {j} out of range"));
            }
            if std::mem::replace(&mut seen[j], true) {
                return bad(format!("selected index {j} repeated"));
            }
        }
        if self.sigma.iter().any(|s| !(*s > 0.0)) {
            return bad("sigma entries must be positive".into());
        }
        let finite = self.mu.iter().chain(&self.sigma).chain(&self.weights).all(|v| v.is_finite());
        if !finite || !self.intercept.is_finite() || !self.lambda_l2.is_finite() {
            return bad("non-finite parameter".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<ReadabilityModel, ModelError> {
        let model: ReadabilityModel = serde_json::from_str(text).map_err(|e| ModelError::Json {
            path: "<memory>".into(),
            source: e,
        })?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| ModelError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    pub fn load(path: &Path) -> Result<ReadabilityModel, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let model: ReadabilityModel = serde_json::from_str(&text).map_err(|e| ModelError::Json {
            path: path.display().to_string(),
            source: e,
        })?;
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(weights: Vec<f64>, selected: Vec<usize>) -> ReadabilityModel {
        ReadabilityModel {
            schema_version: SCHEMA_VERSION.into(),
            mu: vec![0.0; FEATURE_COUNT],
            sigma: vec![1.0; FEATURE_COUNT],
            selected,
            weights,
            intercept: 0.0,
            lambda_l2: 1.0,
            provenance: Provenance::default(),
        }
    }

    fn vector(values: &[(usize, f64)]) -> FeatureVector {
        let mut v = FeatureVector::zeros();
        for &(i, x) in values {
            v.values[i] = x;
        }
        v
    }

    #[test]
    fn zero_margin_is_one_half() {
        let m = model(vec![1.0], vec![3]);
        assert_eq!(m.predict(&vector(&[])).unwrap().probability, 0.5);
    }

    #[test]
    fn zero_weights_give_zero_score() {
        let m = model(vec![0.0, 0.0], vec![1, 7]);
        for x in [vector(&[(1, 5.0)]), vector(&[(7, -3.0), (2, 9.0)])] {
            assert_eq!(m.predict(&x).unwrap().linear_score, 0.0);
        }
    }

    #[test]
    fn positive_weight_is_monotone() {
        let m = model(vec![0.8], vec![5]);
        let a = m.predict(&vector(&[(5, 1.5)])).unwrap();
        let b = m.predict(&vector(&[(5, 3.0)])).unwrap();
        assert!(b.linear_score > a.linear_score && b.probability > a.probability);
    }

    #[test]
    fn probability_stays_open() {
        let m = model(vec![1.0], vec![0]);
        let p = m.predict(&vector(&[(0, 1e4)])).unwrap().probability;
        assert!(p < 1.0);
        let q = m.predict(&vector(&[(0, -1e4)])).unwrap().probability;
        assert!(q > 0.0);
    }

    #[test]
    fn schema_mismatch_names_both() {
        let m = model(vec![1.0], vec![0]);
        let mut x = vector(&[]);
        x.schema_version = "other/v0".into();
        let err = m.predict(&x).unwrap_err().to_string();
        assert!(err.contains("other/v0") && err.contains(SCHEMA_VERSION));
    }

    #[test]
    fn validation_rejects_short_vectors() {
        let mut m = model(vec![1.0], vec![0]);
        m.mu.pop();
        assert!(matches!(m.validate(), Err(ModelError::InvalidModel(_))));
        let m = model(vec![1.0, 2.0], vec![0]);
        assert!(m.validate().is_err());
        let m = model(vec![1.0, 2.0], vec![4, 4]);
        assert!(m.validate().is_err());
    }
}
