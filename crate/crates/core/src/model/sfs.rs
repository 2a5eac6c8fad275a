//! Greedy forward feature selection.

use serde::{Deserialize, Serialize};

use super::cv::{split, stratified_cv};
use super::logreg::train_logreg;
use super::metrics::auc;
use super::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfsResult {
    /// Columns in the order they were added, up to `k_max`.
    pub path: Vec<usize>,
    /// Criterion value after each addition.
    pub scores: Vec<f64>,
    /// The best-scoring prefix of `path`.
    pub selected: Vec<usize>,
}

fn columns(rows: &[Vec<f64>], idx: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| cols.iter().map(|&c| rows[i][c]).collect()).collect()
}

/// Mean held-out AUC of a logistic model on `cols` over fixed inner folds.
pub fn subset_criterion(
    x: &[Vec<f64>],
    y: &[u8],
    cols: &[usize],
    folds: &[usize],
    k: usize,
    lambda: f64,
) -> Result<f64, ModelError> {
    let mut total = 0.0;
    for f in 0..k {
        let (train, test) = split(folds, f);
        let xt = columns(x, &train, cols);
        let yt: Vec<u8> = train.iter().map(|&i| y[i]).collect();
        let fit = train_logreg(&xt, &yt, lambda)?;
        let scores: Vec<f64> = columns(x, &test, cols)
            .iter()
            .map(|r| r.iter().zip(&fit.weights).map(|(a, w)| a * w).sum::<f64>() + fit.intercept)
            .collect();
        let yv: Vec<u8> = test.iter().map(|&i| y[i]).collect();
        total += auc(&scores, &yv)?;
    }
    Ok(total / k as f64)
}

/// Forward selection over `pool` starting from the empty set.
///
/// Each step adds the column with the highest inner-CV AUC; equal scores keep
/// the lower column index. The result is the prefix with the best score, the
/// shorter prefix winning ties.
pub fn sfs(
    x: &[Vec<f64>],
    y: &[u8],
    pool: &[usize],
    k_max: usize,
    inner_folds: usize,
    seed: u64,
    lambda: f64,
) -> Result<SfsResult, ModelError> {
    if k_max == 0 {
        return Err(ModelError::InvalidArgument("k_max must be at least 1".into()));
    }
    if pool.is_empty() {
        return Err(ModelError::InvalidArgument("empty candidate pool".into()));
    }
    let folds = stratified_cv(y, inner_folds, seed)?;
    let mut remaining: Vec<usize> = pool.to_vec();
    remaining.sort_unstable();
    remaining.dedup();
    let steps = k_max.min(remaining.len());

    let mut path = Vec::with_capacity(steps);
    let mut scores = Vec::with_capacity(steps);
    for step in 0..steps {
        let mut best: Option<(usize, f64)> = None;
        for (pos, &c) in remaining.iter().enumerate() {
            let mut cols = path.clone();
            cols.push(c);
            let score = subset_criterion(x, y, &cols, &folds, inner_folds, lambda)?;
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((pos, score));
            }
        }
        let (pos, score) = best.expect("non-empty candidates");
        let chosen = remaining.remove(pos);
        log::debug!("sfs step {}: column {chosen} criterion {score:.6}", step + 1);
        path.push(chosen);
        scores.push(score);
    }

    let mut best_len = 1;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best_len - 1] {
            best_len = i + 1;
        }
    }
    Ok(SfsResult {
        selected: path[..best_len].to_vec(),
        path,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn data(n: usize, d: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let y = x.iter().map(|r| u8::from(r[d - 1] + 0.2 * rng.gen_range(-1.0..1.0) > 0.0)).collect();
        (x, y)
    }

    #[test]
    fn single_step_picks_best_column() {
        let (x, y) = data(120, 4, 5);
        let r = sfs(&x, &y, &[0, 1, 2, 3], 1, 5, 9, 1.0).unwrap();
        let folds = stratified_cv(&y, 5, 9).unwrap();
        let best = (0..4)
            .map(|c| subset_criterion(&x, &y, &[c], &folds, 5, 1.0).unwrap())
            .enumerate()
            .fold((0, f64::MIN), |acc, (c, s)| if s > acc.1 { (c, s) } else { acc });
        assert_eq!(r.selected, vec![best.0]);
        assert_eq!(r.selected, vec![3]);
    }

    #[test]
    fn constant_data_keeps_lowest_index() {
        let x = vec![vec![1.0, 1.0, 1.0]; 20];
        let y: Vec<u8> = (0..20).map(|i| (i % 2) as u8).collect();
        let r = sfs(&x, &y, &[2, 0, 1], 3, 5, 0, 1.0).unwrap();
        assert_eq!(r.path, vec![0, 1, 2]);
        assert_eq!(r.selected, vec![0]);
        assert!(r.scores.iter().all(|&s| s == 0.5));
    }

    #[test]
    fn k_max_is_clamped_to_pool() {
        let (x, y) = data(60, 3, 2);
        let r = sfs(&x, &y, &[0, 2], 10, 5, 1, 1.0).unwrap();
        assert_eq!(r.path.len(), 2);
        assert!(sfs(&x, &y, &[0], 0, 5, 1, 1.0).is_err());
    }
}
