//! Text, JSON and CSV renderings of comparison reports.

use std::str::FromStr;

use super::ComparisonReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected table, json or csv)")),
        }
    }
}

pub const COLUMNS: [&str; 7] = ["Model/Corpus", "Avg A", "Avg B", "Win Rate %", "W/Wmax", "p", "r"];

fn format_p(p: f64) -> String {
    if p < 0.001 {
        "<0.001".to_string()
    } else {
        format!("{p:.3}")
    }
}

fn cells(r: &ComparisonReport) -> [String; 7] {
    [
        r.label.clone(),
        format!("{:.4}", r.avg_a),
        format!("{:.4}", r.avg_b),
        format!("{:.2}", r.win_rate_a * 100.0),
        format!("{:.3}", r.w_over_wmax),
        format_p(r.p_value),
        format!("{:.3}", r.effect_size_r),
    ]
}

pub fn render_report(reports: &[ComparisonReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for r in reports {
                w.write_record(cells(r)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        ReportFormat::Table => {
            let rows: Vec<[String; 7]> = reports.iter().map(cells).collect();
            let mut widths: Vec<usize> = COLUMNS.iter().map(|c| c.len()).collect();
            for row in &rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cols: Vec<&str>| {
                cols.iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = line(COLUMNS.to_vec()) + "\n";
            for row in &rows {
                out += &line(row.iter().map(String::as_str).collect());
                out.push('\n');
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{PMethod, ScoreField};

    fn report(win: f64) -> ComparisonReport {
        ComparisonReport {
            label: "Claude/All".into(),
            field: ScoreField::LinearScore,
            n_pairs: 10,
            n_nonzero: 10,
            avg_a: 0.61,
            avg_b: 0.52,
            win_rate_a: win,
            win_rate_b: 1.0 - win,
            w_plus: 40.0,
            w_minus: 15.0,
            wilcoxon_w: 15.0,
            w_max: 55.0,
            w_over_wmax: 15.0 / 55.0,
            z: 1.3,
            p_value: 0.0004,
            p_method: PMethod::Exact,
            effect_size_r: 0.41,
            no_nonzero_pairs: false,
        }
    }

    #[test]
    fn win_rate_two_decimals() {
        let t = render_report(&[report(0.733)], ReportFormat::Table);
        assert!(t.contains("73.30"), "{t}");
        assert!(t.contains("<0.001"));
        let c = render_report(&[report(0.733)], ReportFormat::Csv);
        assert_eq!(c.lines().nth(1).unwrap().split(',').nth(3), Some("73.30"));
    }

    #[test]
    fn json_round_trip() {
        let reports = vec![report(0.733), report(0.1)];
        let text = render_report(&reports, ReportFormat::Json);
        let back: Vec<ComparisonReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, reports);
    }

    #[test]
    fn empty_set_is_header_only() {
        let t = render_report(&[], ReportFormat::Table);
        assert_eq!(t.lines().count(), 1);
        assert!(t.starts_with("Model/Corpus"));
        assert_eq!(render_report(&[], ReportFormat::Csv).lines().count(), 1);
    }
}
