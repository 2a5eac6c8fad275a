//! Corpus scoring and paired comparison of two scored corpora.

pub mod report;
pub mod wilcoxon;

use std::collections::{BTreeSet, HashMap};
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Snippet;
use crate::model::{ModelError, ReadabilityModel};
use crate::vectorizer::Featurizer;

pub use report::{render_report, ReportFormat};
pub use wilcoxon::{signed_rank, PMethod, WilcoxonResult};

/// Differences and rank gaps at or below this (scaled by the score magnitude) count as ties.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("score table: {0}")]
    Csv(#[from] csv::Error),
    #[error("score table row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("duplicate id `{id}` in table {table}")]
    DuplicateId { table: String, id: String },
    #[error("tables do not pair one-to-one; only in A: [{}]; only in B: [{}]", only_a.join(", "), only_b.join(", "))]
    Unmatched { only_a: Vec<String>, only_b: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub id: String,
    pub linear_score: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub model_ref: String,
    pub corpus_label: String,
    pub rows: Vec<ScoreRow>,
}

/// Which score column a comparison uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreField {
    #[default]
    LinearScore,
    Probability,
}

impl FromStr for ScoreField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" | "linear_score" => Ok(ScoreField::LinearScore),
            "probability" => Ok(ScoreField::Probability),
            other => Err(format!("unknown score field `{other}` (expected linear or probability)")),
        }
    }
}

impl ScoreRow {
    pub fn get(&self, field: ScoreField) -> f64 {
        match field {
            ScoreField::LinearScore => self.linear_score,
            ScoreField::Probability => self.probability,
        }
    }
}

/// Featurize and predict every snippet; rows keep input order.
pub fn score_corpus(
    model: &ReadabilityModel,
    featurizer: &Featurizer,
    snippets: &[Snippet],
) -> Result<ScoreTable, AnalyticsError> {
    let vectors = featurizer.featurize_all(snippets);
    let rows = snippets
        .iter()
        .zip(&vectors)
        .map(|(s, v)| {
            let p = model.predict(v)?;
            Ok(ScoreRow {
                id: s.id.clone(),
                linear_score: p.linear_score,
                probability: p.probability,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(ScoreTable {
        model_ref: String::new(),
        corpus_label: String::new(),
        rows,
    })
}

impl ScoreTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), AnalyticsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "linear_score", "probability"])?;
        for r in &self.rows {
            w.write_record([r.id.clone(), format!("{}", r.linear_score), format!("{}", r.probability)])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, corpus_label: &str) -> Result<ScoreTable, AnalyticsError> {
        let mut reader = csv::Reader::from_reader(input);
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let col = |name: &str| {
            header.iter().position(|h| h == name).ok_or_else(|| AnalyticsError::Row {
                row: 0,
                message: format!("missing column `{name}`"),
            })
        };
        let (ci, cl, cp) = (col("id")?, col("linear_score")?, col("probability")?);
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let num = |c: usize| {
                rec.get(c).unwrap_or("").parse::<f64>().map_err(|e| AnalyticsError::Row {
                    row: i + 1,
                    message: format!("column {c}: {e}"),
                })
            };
            rows.push(ScoreRow {
                id: rec.get(ci).unwrap_or("").to_string(),
                linear_score: num(cl)?,
                probability: num(cp)?,
            });
        }
        Ok(ScoreTable {
            model_ref: String::new(),
            corpus_label: corpus_label.to_string(),
            rows,
        })
    }

    pub fn mean(&self, field: ScoreField) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.get(field)).sum::<f64>() / self.rows.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub label: String,
    pub field: ScoreField,
    pub n_pairs: usize,
    pub n_nonzero: usize,
    pub avg_a: f64,
    pub avg_b: f64,
    /// Fraction of pairs where A scores strictly higher.
    pub win_rate_a: f64,
    pub win_rate_b: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub wilcoxon_w: f64,
    pub w_max: f64,
    /// `W / W_max` with `W_max = n'(n'+1)/2` over nonzero pairs.
    pub w_over_wmax: f64,
    pub z: f64,
    pub p_value: f64,
    pub p_method: PMethod,
    /// `|Z| / sqrt(N)` over all pairs.
    pub effect_size_r: f64,
    pub no_nonzero_pairs: bool,
}

fn index(table: &ScoreTable, name: &str) -> Result<HashMap<String, usize>, AnalyticsError> {
    let mut map = HashMap::with_capacity(table.rows.len());
    for (i, r) in table.rows.iter().enumerate() {
        if map.insert(r.id.clone(), i).is_some() {
            return Err(AnalyticsError::DuplicateId {
                table: name.to_string(),
                id: r.id.clone(),
            });
        }
    }
    Ok(map)
}

/// Pair rows by id and test whether A's scores exceed B's.
pub fn paired_compare(
    a: &ScoreTable,
    b: &ScoreTable,
    field: ScoreField,
    label: &str,
) -> Result<ComparisonReport, AnalyticsError> {
    let ia = index(a, "A")?;
    let ib = index(b, "B")?;
    let only_a: BTreeSet<String> = ia.keys().filter(|k| !ib.contains_key(*k)).cloned().collect();
    let only_b: BTreeSet<String> = ib.keys().filter(|k| !ia.contains_key(*k)).cloned().collect();
    if !only_a.is_empty() || !only_b.is_empty() {
        return Err(AnalyticsError::Unmatched {
            only_a: only_a.into_iter().collect(),
            only_b: only_b.into_iter().collect(),
        });
    }

    let pairs: Vec<(f64, f64)> = a.rows.iter().map(|r| (r.get(field), b.rows[ib[&r.id]].get(field))).collect();
    let n = pairs.len();
    let scale = pairs.iter().fold(1.0f64, |m, (x, y)| m.max(x.abs()).max(y.abs()));
    let tol = RELATIVE_TOLERANCE * scale;
    let diffs: Vec<f64> = pairs.iter().map(|(x, y)| x - y).collect();
    let wins_a = diffs.iter().filter(|&&d| d > tol).count();
    let wins_b = diffs.iter().filter(|&&d| d < -tol).count();
    let rate = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    let test = signed_rank(&diffs, tol);
    let mean = |v: Vec<f64>| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };

    Ok(ComparisonReport {
        label: label.to_string(),
        field,
        n_pairs: n,
        n_nonzero: test.n_nonzero,
        avg_a: mean(pairs.iter().map(|p| p.0).collect()),
        avg_b: mean(pairs.iter().map(|p| p.1).collect()),
        win_rate_a: rate(wins_a),
        win_rate_b: rate(wins_b),
        w_plus: test.w_plus,
        w_minus: test.w_minus,
        wilcoxon_w: test.w,
        w_max: test.w_max,
        w_over_wmax: if test.w_max > 0.0 { test.w / test.w_max } else { 0.0 },
        z: test.z,
        p_value: test.p_value,
        p_method: test.method,
        effect_size_r: if n == 0 { 0.0 } else { test.z.abs() / (n as f64).sqrt() },
        no_nonzero_pairs: test.n_nonzero == 0,
    })
}
