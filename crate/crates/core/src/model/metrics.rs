//! Classification metrics.

use super::ModelError;

/// Area under the ROC curve as the Mann-Whitney statistic
/// `P(pos > neg) + P(pos == neg) / 2`.
///
/// Ranks are kept doubled so the statistic is an exact integer before the
/// final division.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64, ModelError> {
    assert_eq!(scores.len(), labels.len(), "scores and labels differ in length");
    let n_pos = labels.iter().filter(|&&y| y == 1).count() as u128;
    let n_neg = labels.len() as u128 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(ModelError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based positions i+1..=j+1 share the doubled rank (i+1)+(j+1)
        let doubled = (i + j + 2) as u128;
        let positives = order[i..=j].iter().filter(|&&k| labels[k] == 1).count() as u128;
        rank_sum2 += doubled * positives;
        i = j + 1;
    }
    let u2 = rank_sum2 - n_pos * (n_pos + 1);
    Ok(u2 as f64 / (2 * n_pos * n_neg) as f64)
}

/// Fraction of probabilities on the correct side of 0.5 (ties predict 1).
pub fn accuracy(probabilities: &[f64], labels: &[u8]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let correct = probabilities
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| u8::from(p >= 0.5) == y)
        .count();
    correct as f64 / labels.len() as f64
}
