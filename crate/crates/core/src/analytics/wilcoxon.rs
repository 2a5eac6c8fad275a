//! Wilcoxon signed-rank test on paired differences.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Largest nonzero-pair count evaluated by exact enumeration.
pub const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PMethod {
    Exact,
    Normal,
    /// No nonzero differences; p is 1 by convention.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub n_nonzero: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(W+, W-)`.
    pub w: f64,
    /// `n'(n'+1)/2`.
    pub w_max: f64,
    /// Tie-corrected normal deviate of `W+`.
    pub z: f64,
    pub p_value: f64,
    pub method: PMethod,
}

/// Doubled average ranks of `values` (1-based), so ties stay integral.
pub fn doubled_ranks(values: &[f64], tol: f64) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] - values[order[i]] <= tol {
            j += 1;
        }
        for &k in &order[i..=j] {
            ranks[k] = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided exact p for observed doubled `W+`, enumerating all sign assignments
/// of the given doubled ranks by dynamic programming over rank sums.
pub fn exact_p(ranks2: &[u64], w_plus2: u64) -> f64 {
    let total: u64 = ranks2.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in ranks2 {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let all = (1u64 << ranks2.len()) as f64;
    let w = w_plus2 as usize;
    let lower: u64 = counts[..=w].iter().sum();
    let upper: u64 = counts[w..].iter().sum();
    (2.0 * lower.min(upper) as f64 / all).min(1.0)
}

/// Signed-rank test of `diffs` against zero median.
///
/// Differences within `tol` of zero are dropped and absolute differences within
/// `tol` of each other share an average rank.
pub fn signed_rank(diffs: &[f64], tol: f64) -> WilcoxonResult {
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|d| d.abs() > tol).collect();
    let n = nonzero.len();
    if n == 0 {
        return WilcoxonResult {
            n_nonzero: 0,
            w_plus: 0.0,
            w_minus: 0.0,
            w: 0.0,
            w_max: 0.0,
            z: 0.0,
            p_value: 1.0,
            method: PMethod::Degenerate,
        };
    }
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let ranks2 = doubled_ranks(&abs, tol);
    let w_plus2: u64 = ranks2.iter().zip(&nonzero).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();
    let total2: u64 = ranks2.iter().sum();
    let w_plus = w_plus2 as f64 / 2.0;
    let w_minus = (total2 - w_plus2) as f64 / 2.0;

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut sorted = ranks2.clone();
    sorted.sort_unstable();
    for group in sorted.chunk_by(|a, b| a == b) {
        let t = group.len() as f64;
        tie_term += t * t * t - t;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = (w_plus - mean) / var.sqrt();

    let (p_value, method) = if n <= EXACT_LIMIT {
        (exact_p(&ranks2, w_plus2), PMethod::Exact)
    } else {
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        ((2.0 * normal.cdf(-z.abs())).min(1.0), PMethod::Normal)
    };
    WilcoxonResult {
        n_nonzero: n,
        w_plus,
        w_minus,
        w: w_plus.min(w_minus),
        w_max: nf * (nf + 1.0) / 2.0,
        z,
        p_value,
        method,
    }
}
