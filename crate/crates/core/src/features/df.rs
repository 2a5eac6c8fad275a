//! Visual and geometric proxies: the snippet treated as a block of text on screen.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::stats::{population_std, ratio, Summary};
use super::tf::text_counts;
use crate::dictionary::Dictionary;
use crate::lexical::{is_number, split_identifier, LexicalProfile};

/// Size of the printable ASCII range used to normalize the character vocabulary.
pub const PRINTABLE_CHARS: f64 = 95.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DfFeatures {
    pub vkd: f64,
    pub vsd: f64,
    pub vcd: f64,
    pub vc: f64,
    pub saa: f64,
    pub sra: f64,
    pub sr: f64,
    pub sd: f64,
    pub align_op: f64,
    pub align_br: f64,
    pub align_cons: f64,
    pub text_english: f64,
    pub text_comment: f64,
    pub text_vocab: f64,
    pub text_id_len: f64,
}

impl DfFeatures {
    pub const NAMES: [&'static str; 15] = [
        "vkd", "vsd", "vcd", "vc", "saa", "sra", "sr", "sd", "align_op", "align_br", "align_cons",
        "text_english", "text_comment", "text_vocab", "text_id_len",
    ];

    pub fn values(&self) -> [f64; 15] {
        [
            self.vkd, self.vsd, self.vcd, self.vc, self.saa, self.sra, self.sr, self.sd,
            self.align_op, self.align_br, self.align_cons, self.text_english, self.text_comment,
            self.text_vocab, self.text_id_len,
        ]
    }
}

/// Keyword, string and comment character densities, and vocabulary size / 95.
pub fn visual_densities(profile: &LexicalProfile) -> (f64, f64, f64, f64) {
    let total = profile.total_chars as f64;
    (
        ratio(profile.keyword_chars as f64, total),
        ratio(profile.string_chars as f64, total),
        ratio(profile.comment_chars as f64, total),
        profile.char_counts.len() as f64 / PRINTABLE_CHARS,
    )
}

/// 1 - std/max(1, avg) of line lengths; 0 for an empty collection.
pub fn spatial_regularity(lengths: &[f64]) -> f64 {
    if lengths.is_empty() {
        return 0.0;
    }
    let s = Summary::of(lengths);
    1.0 - s.std / s.avg.max(1.0)
}

/// (absolute area, relative area, regularity, density).
pub fn spatial(profile: &LexicalProfile) -> (f64, f64, f64, f64) {
    let n_char = profile.total_chars as f64;
    let widest = profile.lines.iter().map(|l| l.length).max().unwrap_or(0) as f64;
    let lengths: Vec<f64> = profile.lines.iter().map(|l| l.length as f64).collect();
    (
        n_char,
        ratio(n_char, profile.m as f64 * widest),
        spatial_regularity(&lengths),
        ratio(profile.m_ne as f64, profile.m as f64),
    )
}

/// `1 / (1 + std(columns))`, with std taken as 0 for fewer than two columns.
pub fn alignment_score(columns: &[usize]) -> f64 {
    if columns.len() <= 1 {
        return 1.0;
    }
    let v: Vec<f64> = columns.iter().map(|&c| c as f64).collect();
    1.0 / (1.0 + population_std(&v))
}

/// (operator alignment, bracket alignment, their mean).
pub fn alignment(profile: &LexicalProfile) -> (f64, f64, f64) {
    let op = alignment_score(&profile.assignment_columns());
    let br = alignment_score(&profile.bracket_columns());
    (op, br, (op + br) / 2.0)
}

fn alphabetic_terms(ident: &str) -> Vec<String> {
    split_identifier(ident).into_iter().filter(|t| !is_number(t)).collect()
}

/// An identifier counts as English when it has terms and every term is a known word.
pub fn is_english_identifier(ident: &str, dictionary: &Dictionary) -> bool {
    let terms = alphabetic_terms(ident);
    !terms.is_empty() && terms.iter().all(|t| dictionary.is_english(t))
}

/// (English ratio, comment word ratio, vocabulary size, mean identifier length).
pub fn text_features(profile: &LexicalProfile, dictionary: &Dictionary) -> (f64, f64, f64, f64) {
    let users = &profile.user_identifiers;
    let n_user = users.len() as f64;
    let english = users.iter().filter(|i| is_english_identifier(i, dictionary)).count() as f64;
    let comment_words = text_counts(&profile.comment_text()).words as f64;
    let code_words = users.iter().map(|i| alphabetic_terms(i).len()).sum::<usize>() as f64;
    let vocab: BTreeSet<&str> = users.iter().map(String::as_str).collect();
    let id_len = users.iter().map(|i| i.chars().count()).sum::<usize>() as f64;
    (
        ratio(english, n_user),
        ratio(comment_words, comment_words + code_words),
        vocab.len() as f64,
        ratio(id_len, n_user),
    )
}

pub fn compute_df(profile: &LexicalProfile, dictionary: &Dictionary) -> DfFeatures {
    // with no lines there is no evidence for any visual property
    if profile.m == 0 {
        return DfFeatures::default();
    }
    let (vkd, vsd, vcd, vc) = visual_densities(profile);
    let (saa, sra, sr, sd) = spatial(profile);
    let (align_op, align_br, align_cons) = alignment(profile);
    let (text_english, text_comment, text_vocab, text_id_len) = text_features(profile, dictionary);
    DfFeatures {
        vkd,
        vsd,
        vcd,
        vc,
        saa,
        sra,
        sr,
        sd,
        align_op,
        align_br,
        align_cons,
        text_english,
        text_comment,
        text_vocab,
        text_id_len,
    }
}
