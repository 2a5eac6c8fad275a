//! Fixed-order 61-dimensional feature vectors and their CSV matrix form.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::ops::Range;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Language, Snippet};
use crate::dictionary::Dictionary;
use crate::features::{
    compute_bwf, compute_df, compute_pf, compute_tf, BwfFeatures, DfFeatures, FeatureConfig, PfFeatures,
    TfFeatures,
};
use crate::lexical::{tokenize, LanguageProfile};

pub const SCHEMA_VERSION: &str = "coderead-features-61/v1";
pub const FEATURE_COUNT: usize = 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "TF")]
    Tf,
    #[serde(rename = "BWF")]
    Bwf,
    #[serde(rename = "PF")]
    Pf,
    #[serde(rename = "DF")]
    Df,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Tf, Family::Bwf, Family::Pf, Family::Df];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tf => "TF",
            Family::Bwf => "BWF",
            Family::Pf => "PF",
            Family::Df => "DF",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::Tf => "tf",
            Family::Bwf => "bwf",
            Family::Pf => "pf",
            Family::Df => "df",
        }
    }

    /// Column range of this family inside the full vector.
    pub fn columns(self) -> Range<usize> {
        match self {
            Family::Tf => 0..16,
            Family::Bwf => 16..42,
            Family::Pf => 42..46,
            Family::Df => 46..61,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single family or the full vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSelection {
    #[serde(rename = "TF")]
    Tf,
    #[serde(rename = "BWF")]
    Bwf,
    #[serde(rename = "PF")]
    Pf,
    #[serde(rename = "DF")]
    Df,
    #[serde(rename = "ALL")]
    All,
}

impl FeatureSelection {
    pub const ALL: [FeatureSelection; 5] = [
        FeatureSelection::Tf,
        FeatureSelection::Bwf,
        FeatureSelection::Pf,
        FeatureSelection::Df,
        FeatureSelection::All,
    ];

    pub fn columns(self) -> Vec<usize> {
        match self {
            FeatureSelection::Tf => Family::Tf.columns().collect(),
            FeatureSelection::Bwf => Family::Bwf.columns().collect(),
            FeatureSelection::Pf => Family::Pf.columns().collect(),
            FeatureSelection::Df => Family::Df.columns().collect(),
            FeatureSelection::All => (0..FEATURE_COUNT).collect(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FeatureSelection::Tf => "TF",
            FeatureSelection::Bwf => "BWF",
            FeatureSelection::Pf => "PF",
            FeatureSelection::Df => "DF",
            FeatureSelection::All => "All-features",
        }
    }
}

impl FromStr for FeatureSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tf" => Ok(FeatureSelection::Tf),
            "bwf" => Ok(FeatureSelection::Bwf),
            "pf" => Ok(FeatureSelection::Pf),
            "df" => Ok(FeatureSelection::Df),
            "all" | "all-features" => Ok(FeatureSelection::All),
            other => Err(format!("unknown feature family `{other}` (expected tf, bwf, pf, df or all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaEntry {
    pub name: String,
    pub family: Family,
}

/// The 61 feature names, index-aligned with [`FeatureVector::values`].
pub fn schema() -> &'static [SchemaEntry] {
    static SCHEMA: OnceLock<Vec<SchemaEntry>> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        let blocks: [(Family, &[&str]); 4] = [
            (Family::Tf, &TfFeatures::NAMES),
            (Family::Bwf, &BwfFeatures::NAMES),
            (Family::Pf, &PfFeatures::NAMES),
            (Family::Df, &DfFeatures::NAMES),
        ];
        blocks
            .iter()
            .flat_map(|(family, names)| {
                names.iter().map(move |n| SchemaEntry {
                    name: format!("{}.{n}", family.prefix()),
                    family: *family,
                })
            })
            .collect()
    })
}

pub fn feature_index(name: &str) -> Option<usize> {
    schema().iter().position(|e| e.name == name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub schema_version: String,
}

impl FeatureVector {
    pub fn zeros() -> FeatureVector {
        FeatureVector {
            values: vec![0.0; FEATURE_COUNT],
            schema_version: SCHEMA_VERSION.to_string(),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        feature_index(name).map(|i| self.values[i])
    }

    pub fn family(&self, family: Family) -> &[f64] {
        &self.values[family.columns()]
    }
}

/// Compute the full vector of one preprocessed snippet.
pub fn featurize(
    snippet: &Snippet,
    profile: &LanguageProfile,
    dictionary: &Dictionary,
    config: &FeatureConfig,
) -> FeatureVector {
    let lex = tokenize(snippet, profile);
    let mut values = Vec::with_capacity(FEATURE_COUNT);
    values.extend(compute_tf(&lex, dictionary, config).values());
    values.extend(compute_bwf(&lex, config).values());
    values.extend(compute_pf(&lex).values());
    values.extend(compute_df(&lex, dictionary).values());
    debug_assert_eq!(values.len(), FEATURE_COUNT);
    // undefined quantities default to zero
    for v in &mut values {
        if !v.is_finite() {
            *v = 0.0;
        }
    }
    FeatureVector {
        values,
        schema_version: SCHEMA_VERSION.to_string(),
    }
}

/// Featurizes snippets of any supported language with shared resources.
#[derive(Debug, Clone)]
pub struct Featurizer {
    pub dictionary: Dictionary,
    pub config: FeatureConfig,
    profiles: HashMap<Language, LanguageProfile>,
}

impl Featurizer {
    pub fn new(dictionary: Dictionary, config: FeatureConfig) -> Featurizer {
        let profiles = Language::ALL
            .iter()
            .map(|&l| (l, LanguageProfile::builtin(l)))
            .collect();
        Featurizer {
            dictionary,
            config,
            profiles,
        }
    }

    /// Replace the rules used for one language.
    pub fn with_profile(mut self, language: Language, profile: LanguageProfile) -> Featurizer {
        self.profiles.insert(language, profile);
        self
    }

    pub fn profile(&self, language: Language) -> &LanguageProfile {
        &self.profiles[&language]
    }

    pub fn featurize(&self, snippet: &Snippet) -> FeatureVector {
        featurize(snippet, self.profile(snippet.language), &self.dictionary, &self.config)
    }

    /// Featurize in parallel; output order matches input order.
    pub fn featurize_all(&self, snippets: &[Snippet]) -> Vec<FeatureVector> {
        snippets.par_iter().map(|s| self.featurize(s)).collect()
    }
}

impl Default for Featurizer {
    fn default() -> Self {
        Featurizer::new(Dictionary::fallback(), FeatureConfig::default())
    }
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("feature matrix: {0}")]
    Csv(#[from] csv::Error),
    #[error("feature matrix header does not match the {expected}-column schema")]
    Header { expected: usize },
    #[error("feature matrix row {row}: {message}")]
    Row { row: usize, message: String },
}

pub fn matrix_header() -> Vec<String> {
    std::iter::once("id".to_string())
        .chain(schema().iter().map(|e| e.name.clone()))
        .collect()
}

/// Write `id` + 61 columns. Values use the shortest representation that round-trips.
pub fn write_matrix<W: Write>(out: W, rows: &[(String, FeatureVector)]) -> Result<(), MatrixError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(matrix_header())?;
    for (id, vector) in rows {
        let mut record = Vec::with_capacity(FEATURE_COUNT + 1);
        record.push(id.clone());
        record.extend(vector.values.iter().map(|v| format!("{v}")));
        writer.write_record(&record)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_matrix<R: Read>(input: R) -> Result<Vec<(String, FeatureVector)>, MatrixError> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != matrix_header() {
        return Err(MatrixError::Header {
            expected: FEATURE_COUNT,
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>().map_err(|e| MatrixError::Row {
                    row: i + 1,
                    message: format!("`{v}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((
            record[0].to_string(),
            FeatureVector {
                values,
                schema_version: SCHEMA_VERSION.to_string(),
            },
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_layout() {
        let s = schema();
        assert_eq!(s.len(), 61);
        let count = |f| s.iter().filter(|e| e.family == f).count();
        assert_eq!([count(Family::Tf), count(Family::Bwf), count(Family::Pf), count(Family::Df)], [16, 26, 4, 15]);
        assert_eq!(s[16].family, Family::Bwf);
        assert_eq!(s[15].family, Family::Tf);
        for f in Family::ALL {
            assert!(f.columns().all(|i| s[i].family == f));
        }
        let names: std::collections::BTreeSet<_> = s.iter().map(|e| &e.name).collect();
        assert_eq!(names.len(), 61);
    }

    #[test]
    fn empty_snippet_is_all_zeros() {
        let s = Snippet::load("", Language::Python, "e").preprocess();
        let v = Featurizer::default().featurize(&s);
        assert_eq!(v.values, vec![0.0; 61]);
    }

    #[test]
    fn named_lookup_matches_position() {
        let s = Snippet::load("x = a + b", Language::Python, "h").preprocess();
        let v = Featurizer::default().featurize(&s);
        let idx = feature_index("pf.halstead_volume").unwrap();
        assert_eq!(v.values[idx], v.get("pf.halstead_volume").unwrap());
        assert!((v.values[idx] - 5.0 * 5f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn selection_parsing() {
        assert_eq!("PF".parse::<FeatureSelection>().unwrap().columns(), (42..46).collect::<Vec<_>>());
        assert_eq!("all".parse::<FeatureSelection>().unwrap().columns().len(), 61);
        assert!("xf".parse::<FeatureSelection>().is_err());
    }

    #[test]
    fn matrix_rejects_wrong_header() {
        let csv = "id,a,b\nx,1,2\n";
        assert!(matches!(read_matrix(csv.as_bytes()), Err(MatrixError::Header { .. })));
    }
}
