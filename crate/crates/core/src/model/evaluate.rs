//! Stratified k-fold evaluation with selection nested inside each training split.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{split, stratified_cv};
use super::logreg::{sigmoid, train_logreg};
use super::metrics::{accuracy, auc};
use super::scaler::ScalerParams;
use super::sfs::sfs;
use super::{check_labels, rows, subset, ModelError, ModelSettings};
use crate::vectorizer::{FeatureSelection, FeatureVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub family: String,
    pub candidates: usize,
    pub k_max: usize,
    /// Median selected-feature count across folds.
    pub features: f64,
    pub fold_features: Vec<usize>,
    pub accuracy: f64,
    pub auc: f64,
    pub fold_accuracy: Vec<f64>,
    pub fold_auc: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub seed: u64,
    pub folds: usize,
    pub inner_folds: usize,
    pub lambda_l2: f64,
    pub n_samples: usize,
    pub fold_assignments: Vec<usize>,
    pub results: Vec<FamilyResult>,
}

struct FoldOutcome {
    accuracy: f64,
    auc: f64,
    features: usize,
}

/// Seed of the inner selection folds inside outer fold `fold`.
pub fn inner_seed(seed: u64, fold: usize) -> u64 {
    seed.wrapping_add(fold as u64 + 1)
}

fn median(values: &[usize]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn run_fold(
    raw: &[Vec<f64>],
    labels: &[u8],
    folds: &[usize],
    fold: usize,
    selection: FeatureSelection,
    settings: &ModelSettings,
) -> Result<FoldOutcome, ModelError> {
    let (train, test) = split(folds, fold);
    let train_raw: Vec<Vec<f64>> = train.iter().map(|&i| raw[i].clone()).collect();
    let y_train: Vec<u8> = train.iter().map(|&i| labels[i]).collect();
    let scaler = ScalerParams::fit(&train_raw)?;
    let x_train = scaler.transform(&train_raw);
    let chosen = sfs(
        &x_train,
        &y_train,
        &selection.columns(),
        settings.k_max_for(selection),
        settings.inner_folds,
        inner_seed(settings.seed, fold),
        settings.lambda_l2,
    )?
    .selected;
    let all: Vec<usize> = (0..x_train.len()).collect();
    let fit = train_logreg(&subset(&x_train, &all, &chosen), &y_train, settings.lambda_l2)?;

    let y_test: Vec<u8> = test.iter().map(|&i| labels[i]).collect();
    let margins: Vec<f64> = test
        .iter()
        .map(|&i| {
            let x = scaler.transform_row(&raw[i]);
            chosen.iter().zip(&fit.weights).map(|(&j, w)| x[j] * w).sum::<f64>() + fit.intercept
        })
        .collect();
    let probabilities: Vec<f64> = margins.iter().map(|&z| sigmoid(z)).collect();
    Ok(FoldOutcome {
        accuracy: accuracy(&probabilities, &y_test),
        auc: auc(&margins, &y_test)?,
        features: chosen.len(),
    })
}

/// Mean held-out accuracy and AUC over `k` stratified folds, per selection.
///
/// Scaling, selection and fitting see only the training part of each fold.
/// Folds run in parallel and are merged by fold index.
pub fn evaluate(
    vectors: &[FeatureVector],
    labels: &[u8],
    selections: &[FeatureSelection],
    k: usize,
    settings: &ModelSettings,
) -> Result<EvaluationReport, ModelError> {
    check_labels(vectors, labels)?;
    let raw = rows(vectors);
    let folds = stratified_cv(labels, k, settings.seed)?;
    let mut results = Vec::with_capacity(selections.len());
    for &selection in selections {
        let outcomes = (0..k)
            .into_par_iter()
            .map(|f| run_fold(&raw, labels, &folds, f, selection, settings))
            .collect::<Result<Vec<_>, _>>()?;
        let fold_accuracy: Vec<f64> = outcomes.iter().map(|o| o.accuracy).collect();
        let fold_auc: Vec<f64> = outcomes.iter().map(|o| o.auc).collect();
        let fold_features: Vec<usize> = outcomes.iter().map(|o| o.features).collect();
        log::info!("evaluated {} over {k} folds", selection.label());
        results.push(FamilyResult {
            family: selection.label().to_string(),
            candidates: selection.columns().len(),
            k_max: settings.k_max_for(selection),
            features: median(&fold_features),
            fold_features,
            accuracy: fold_accuracy.iter().sum::<f64>() / k as f64,
            auc: fold_auc.iter().sum::<f64>() / k as f64,
            fold_accuracy,
            fold_auc,
        });
    }
    Ok(EvaluationReport {
        seed: settings.seed,
        folds: k,
        inner_folds: settings.inner_folds,
        lambda_l2: settings.lambda_l2,
        n_samples: labels.len(),
        fold_assignments: folds,
        results,
    })
}

impl EvaluationReport {
    /// Aligned text table: family, selected features, accuracy and AUC in percent.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<14} {:>8} {:>9} {:>7}", "Family", "Features", "Accuracy", "AUC");
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<14} {:>8} {:>8.1}% {:>6.1}%",
                r.family,
                r.features,
                r.accuracy * 100.0,
                r.auc * 100.0
            );
        }
        out
    }
}
