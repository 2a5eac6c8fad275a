//! Density-based clustering over an arbitrary distance function.

/// Cluster labels: `Some(cluster)` or `None` for noise.
///
/// A point is a core point when at least `min_samples` points (itself
/// included) lie within distance `eps`. Clusters are numbered in order of
/// their first core point, so the result is deterministic.
pub fn dbscan<F>(n: usize, eps: f64, min_samples: usize, distance: F) -> Vec<Option<usize>>
where
    F: Fn(usize, usize) -> f64,
{
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| i == j || distance(i, j) <= eps).collect())
        .collect();
    let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_samples).collect();

    let mut labels = vec![None; n];
    let mut next = 0;
    for start in 0..n {
        if labels[start].is_some() || !is_core[start] {
            continue;
        }
        labels[start] = Some(next);
        let mut queue = vec![start];
        while let Some(p) = queue.pop() {
            for &q in &neighbors[p] {
                if labels[q].is_none() {
                    labels[q] = Some(next);
                    if is_core[q] {
                        queue.push(q);
                    }
                }
            }
        }
        next += 1;
    }
    labels
}

pub fn cluster_count(labels: &[Option<usize>]) -> usize {
    labels.iter().flatten().max().map_or(0, |m| m + 1)
}
