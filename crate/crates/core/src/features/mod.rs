//! The four feature families computed from a [`LexicalProfile`](crate::lexical::LexicalProfile).

pub mod bwf;
pub mod dbscan;
pub mod df;
pub mod pf;
pub mod stats;
pub mod tf;

use serde::{Deserialize, Serialize};

pub use bwf::{compute_bwf, BwfFeatures};
pub use df::{compute_df, DfFeatures};
pub use pf::{compute_pf, line_entropy, PfFeatures};
pub use tf::{compute_tf, TfFeatures};

/// Tunables shared by the feature extractors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub dbscan_eps: f64,
    pub dbscan_min_samples: usize,
    pub tab_width: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            dbscan_eps: 0.5,
            dbscan_min_samples: 2,
            tab_width: 4,
        }
    }
}
