//! Stratified k-fold assignment.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ModelError;

/// Fold index per item. Each class is shuffled under `seed` and dealt
/// round-robin, the dealing position carrying over from one class to the next.
pub fn stratified_cv(labels: &[u8], k: usize, seed: u64) -> Result<Vec<usize>, ModelError> {
    if k < 2 {
        return Err(ModelError::InvalidArgument(format!("cross-validation needs at least 2 folds, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0usize; labels.len()];
    let mut next = 0usize;
    for class in [0u8, 1u8] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k {
            return Err(ModelError::ClassTooSmall {
                class,
                count: members.len(),
                folds: k,
            });
        }
        members.shuffle(&mut rng);
        for i in members {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(folds)
}

/// (train, test) index lists for fold `f`.
pub fn split(folds: &[usize], f: usize) -> (Vec<usize>, Vec<usize>) {
    (0..folds.len()).partition(|&i| folds[i] != f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_counts() {
        let labels: Vec<u8> = (0..360).map(|i| (i % 2) as u8).collect();
        let folds = stratified_cv(&labels, 10, 7).unwrap();
        for f in 0..10 {
            let members: Vec<usize> = (0..360).filter(|&i| folds[i] == f).collect();
            assert_eq!(members.len(), 36);
            assert_eq!(members.iter().filter(|&&i| labels[i] == 1).count(), 18);
        }
    }

    #[test]
    fn proportional_when_unbalanced() {
        let labels: Vec<u8> = (0..103).map(|i| u8::from(i % 3 == 0)).collect();
        let folds = stratified_cv(&labels, 10, 1).unwrap();
        let pos_total = labels.iter().filter(|&&y| y == 1).count() as f64;
        for f in 0..10 {
            let size = folds.iter().filter(|&&x| x == f).count();
            assert!((10..=11).contains(&size));
            let pos = (0..103).filter(|&i| folds[i] == f && labels[i] == 1).count() as f64;
            assert!((pos - pos_total / 10.0).abs() <= 1.0);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let labels: Vec<u8> = (0..50).map(|i| (i % 2) as u8).collect();
        assert_eq!(stratified_cv(&labels, 5, 3).unwrap(), stratified_cv(&labels, 5, 3).unwrap());
        assert_ne!(stratified_cv(&labels, 5, 3).unwrap(), stratified_cv(&labels, 5, 4).unwrap());
    }

    #[test]
    fn contract_errors() {
        let labels = [0u8, 1, 0, 1];
        assert!(matches!(stratified_cv(&labels, 1, 0), Err(ModelError::InvalidArgument(_))));
        assert!(matches!(stratified_cv(&labels, 3, 0), Err(ModelError::ClassTooSmall { .. })));
    }
}
