//! Per-column z-score normalization.

use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl ScalerParams {
    /// Population mean and std per column; constant columns get `sigma = 1`.
    pub fn fit(rows: &[Vec<f64>]) -> Result<ScalerParams, ModelError> {
        let first = rows.first().ok_or(ModelError::EmptyData)?;
        let d = first.len();
        let n = rows.len() as f64;
        let mut mu = vec![0.0; d];
        for row in rows {
            for (m, v) in mu.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut mu {
            *m /= n;
        }
        let mut var = vec![0.0; d];
        for row in rows {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mu) {
                *s += (v - m) * (v - m);
            }
        }
        let sigma = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 0.0 && sd.is_finite() {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(ScalerParams { mu, sigma })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mu.iter().zip(&self.sigma))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }
}
