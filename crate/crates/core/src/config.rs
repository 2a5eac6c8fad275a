//! TOML run configuration.
//!
//! ```toml
//! seed = 42
//! [dictionary]
//! path = "/usr/share/wordnet"
//! [tf.dbscan]
//! eps = 0.5
//! min_samples = 2
//! [bwf]
//! tab_width = 4
//! [model]
//! lambda_l2 = 1.0
//! folds = 10
//! inner_folds = 5
//! k_max = 20
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureConfig;
use crate::model::ModelSettings;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    #[serde(default)]
    pub dictionary: DictionarySection,
    #[serde(default)]
    pub tf: TfSection,
    #[serde(default)]
    pub bwf: BwfSection,
    #[serde(default)]
    pub model: ModelSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionarySection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfSection {
    #[serde(default)]
    pub dbscan: DbscanSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbscanSection {
    pub eps: Option<f64>,
    pub min_samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BwfSection {
    pub tab_width: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub lambda_l2: Option<f64>,
    pub folds: Option<usize>,
    pub inner_folds: Option<usize>,
    pub k_max: Option<usize>,
}

/// Every tunable after defaults and overrides are applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub seed: u64,
    pub dictionary: Option<PathBuf>,
    pub features: FeatureConfig,
    pub model: ModelSettings,
    pub folds: usize,
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        ResolvedConfig {
            seed: 42,
            dictionary: None,
            features: FeatureConfig::default(),
            model: ModelSettings::default(),
            folds: 10,
        }
    }
}

impl ConfigFile {
    pub fn from_toml(text: &str, origin: &str) -> Result<ConfigFile, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            source: e,
        })
    }

    pub fn load(path: &Path) -> Result<ConfigFile, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        ConfigFile::from_toml(&text, &path.display().to_string())
    }

    /// Overlay the file's values on `base`.
    pub fn apply(&self, mut base: ResolvedConfig) -> ResolvedConfig {
        if let Some(s) = self.seed {
            base.seed = s;
        }
        if let Some(p) = &self.dictionary.path {
            base.dictionary = Some(p.clone());
        }
        if let Some(e) = self.tf.dbscan.eps {
            base.features.dbscan_eps = e;
        }
        if let Some(m) = self.tf.dbscan.min_samples {
            base.features.dbscan_min_samples = m;
        }
        if let Some(t) = self.bwf.tab_width {
            base.features.tab_width = t;
        }
        if let Some(l) = self.model.lambda_l2 {
            base.model.lambda_l2 = l;
        }
        if let Some(f) = self.model.folds {
            base.folds = f;
        }
        if let Some(f) = self.model.inner_folds {
            base.model.inner_folds = f;
        }
        if let Some(k) = self.model.k_max {
            base.model.k_max = Some(k);
        }
        base
    }
}

impl ResolvedConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        let f = &self.features;
        if !(0.0..=1.0).contains(&f.dbscan_eps) {
            return bad("tf.dbscan.eps must lie in [0, 1]");
        }
        if f.dbscan_min_samples == 0 {
            return bad("tf.dbscan.min_samples must be at least 1");
        }
        if f.tab_width == 0 {
            return bad("bwf.tab_width must be at least 1");
        }
        if !(self.model.lambda_l2 >= 0.0 && self.model.lambda_l2.is_finite()) {
            return bad("model.lambda_l2 must be finite and non-negative");
        }
        if self.folds < 2 || self.model.inner_folds < 2 {
            return bad("model.folds and model.inner_folds must be at least 2");
        }
        if self.model.k_max == Some(0) {
            return bad("model.k_max must be at least 1");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let text = "seed = 7\n[tf.dbscan]\neps = 0.3\n[bwf]\ntab_width = 8\n[model]\nlambda_l2 = 0.5\nk_max = 3\n";
        let r = ConfigFile::from_toml(text, "t").unwrap().apply(ResolvedConfig::default());
        assert_eq!(r.seed, 7);
        assert_eq!(r.features.dbscan_eps, 0.3);
        assert_eq!(r.features.dbscan_min_samples, 2);
        assert_eq!(r.features.tab_width, 8);
        assert_eq!(r.model.lambda_l2, 0.5);
        assert_eq!(r.model.k_max, Some(3));
        assert_eq!(r.folds, 10);
        r.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(ConfigFile::from_toml("[tf]\nepsilon = 1", "t"), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn validation() {
        let mut r = ResolvedConfig::default();
        r.validate().unwrap();
        r.features.dbscan_eps = 1.5;
        assert!(r.validate().is_err());
        let r = ResolvedConfig { folds: 1, ..ResolvedConfig::default() };
        assert!(r.validate().is_err());
    }
}
