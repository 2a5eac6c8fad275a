//! Formatting and low-level structural statistics over code lines.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::stats::ratio;
use super::FeatureConfig;
use crate::lexical::{LexicalProfile, LineCounts, LineProfile};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BwfFeatures {
    pub line_len_avg: f64,
    pub line_len_max: f64,
    pub id_len_avg: f64,
    pub id_len_max: f64,
    pub ids_per_line_avg: f64,
    pub ids_per_line_max: f64,
    pub indent_avg: f64,
    pub indent_max: f64,
    pub kw_avg: f64,
    pub kw_max: f64,
    pub num_avg: f64,
    pub num_max: f64,
    pub paren_avg: f64,
    pub bracket_avg: f64,
    pub period_avg: f64,
    pub blank_ratio: f64,
    pub comment_ratio: f64,
    pub comma_avg: f64,
    pub space_avg: f64,
    pub assign_avg: f64,
    pub branch_avg: f64,
    pub loop_avg: f64,
    pub arith_avg: f64,
    pub cmp_avg: f64,
    pub max_char_occurrence: f64,
    pub max_identifier_occurrence: f64,
}

impl BwfFeatures {
    pub const NAMES: [&'static str; 26] = [
        "line_len_avg", "line_len_max", "id_len_avg", "id_len_max", "ids_per_line_avg",
        "ids_per_line_max", "indent_avg", "indent_max", "kw_avg", "kw_max", "num_avg", "num_max",
        "paren_avg", "bracket_avg", "period_avg", "blank_ratio", "comment_ratio", "comma_avg",
        "space_avg", "assign_avg", "branch_avg", "loop_avg", "arith_avg", "cmp_avg",
        "max_char_occurrence", "max_identifier_occurrence",
    ];

    pub fn values(&self) -> [f64; 26] {
        [
            self.line_len_avg, self.line_len_max, self.id_len_avg, self.id_len_max,
            self.ids_per_line_avg, self.ids_per_line_max, self.indent_avg, self.indent_max,
            self.kw_avg, self.kw_max, self.num_avg, self.num_max, self.paren_avg, self.bracket_avg,
            self.period_avg, self.blank_ratio, self.comment_ratio, self.comma_avg, self.space_avg,
            self.assign_avg, self.branch_avg, self.loop_avg, self.arith_avg, self.cmp_avg,
            self.max_char_occurrence, self.max_identifier_occurrence,
        ]
    }
}

struct CodeLines<'a> {
    lines: Vec<&'a LineProfile>,
}

impl CodeLines<'_> {
    fn avg(&self, f: impl Fn(&LineProfile) -> usize) -> f64 {
        ratio(self.lines.iter().map(|l| f(l)).sum::<usize>() as f64, self.lines.len() as f64)
    }

    fn max(&self, f: impl Fn(&LineProfile) -> usize) -> f64 {
        self.lines.iter().map(|l| f(l)).max().unwrap_or(0) as f64
    }

    fn count_avg(&self, f: impl Fn(&LineCounts) -> usize) -> f64 {
        self.avg(|l| f(&l.counts))
    }
}

pub fn compute_bwf(profile: &LexicalProfile, config: &FeatureConfig) -> BwfFeatures {
    let code = CodeLines {
        lines: profile.code_lines().collect(),
    };
    let tab = config.tab_width;

    let id_lens: Vec<usize> = profile.identifiers.iter().map(|i| i.chars().count()).collect();
    let mut id_freq: HashMap<&str, usize> = HashMap::new();
    for id in &profile.identifiers {
        *id_freq.entry(id.as_str()).or_default() += 1;
    }

    BwfFeatures {
        line_len_avg: code.avg(|l| l.length),
        line_len_max: code.max(|l| l.length),
        id_len_avg: ratio(id_lens.iter().sum::<usize>() as f64, id_lens.len() as f64),
        id_len_max: id_lens.iter().copied().max().unwrap_or(0) as f64,
        ids_per_line_avg: code.count_avg(|c| c.identifiers),
        ids_per_line_max: code.max(|l| l.counts.identifiers),
        indent_avg: code.avg(|l| l.indent(tab)),
        indent_max: code.max(|l| l.indent(tab)),
        kw_avg: code.count_avg(|c| c.keywords),
        kw_max: code.max(|l| l.counts.keywords),
        num_avg: code.count_avg(|c| c.numbers),
        num_max: code.max(|l| l.counts.numbers),
        paren_avg: code.count_avg(|c| c.parentheses),
        bracket_avg: code.count_avg(|c| c.brackets),
        period_avg: code.count_avg(|c| c.periods),
        blank_ratio: ratio(profile.m_blank as f64, profile.m as f64),
        comment_ratio: ratio(profile.m_comment as f64, profile.m as f64),
        comma_avg: code.count_avg(|c| c.commas),
        space_avg: code.count_avg(|c| c.spaces),
        assign_avg: code.count_avg(|c| c.assignments),
        branch_avg: code.count_avg(|c| c.branches),
        loop_avg: code.count_avg(|c| c.loops),
        arith_avg: code.count_avg(|c| c.arithmetic),
        cmp_avg: code.count_avg(|c| c.comparisons),
        max_char_occurrence: profile.char_counts.values().copied().max().unwrap_or(0) as f64,
        max_identifier_occurrence: id_freq.values().copied().max().unwrap_or(0) as f64,
    }
}
