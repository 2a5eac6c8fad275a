//! Size and information-theoretic features.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::stats::Summary;
use crate::lexical::{HalsteadCounts, LexicalProfile};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PfFeatures {
    pub loc: f64,
    pub entropy_avg: f64,
    pub entropy_std: f64,
    pub halstead_volume: f64,
}

impl PfFeatures {
    pub const NAMES: [&'static str; 4] = ["loc", "entropy_avg", "entropy_std", "halstead_volume"];

    pub fn values(&self) -> [f64; 4] {
        [self.loc, self.entropy_avg, self.entropy_std, self.halstead_volume]
    }
}

/// Shannon entropy in bits of the line's character distribution.
pub fn line_entropy(line: &str) -> f64 {
    // ordered so the floating-point sum is reproducible
    let mut counts: BTreeMap<char, usize> = BTreeMap::new();
    let mut n = 0usize;
    for c in line.chars() {
        *counts.entry(c).or_default() += 1;
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let h: f64 = counts
        .values()
        .map(|&k| {
            let p = k as f64 / n;
            -p * p.log2()
        })
        .sum();
    // a single-symbol line sums to -0.0
    h.max(0.0)
}

/// `N * log2(eta)`, zero when `eta <= 1`.
pub fn halstead_volume(h: &HalsteadCounts) -> f64 {
    let vocabulary = h.vocabulary();
    if vocabulary <= 1 {
        return 0.0;
    }
    h.length() as f64 * (vocabulary as f64).log2()
}

pub fn compute_pf(profile: &LexicalProfile) -> PfFeatures {
    let entropies: Vec<f64> = profile
        .lines
        .iter()
        .filter(|l| !l.blank)
        .map(|l| line_entropy(&l.text))
        .collect();
    let s = Summary::of(&entropies);
    PfFeatures {
        loc: profile.m_ne as f64,
        entropy_avg: s.avg,
        entropy_std: s.std,
        halstead_volume: halstead_volume(&profile.halstead),
    }
}
