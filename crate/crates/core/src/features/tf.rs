//! Textual features: comment/identifier consistency, identifier semantics,
//! comment readability, block coherence and concept count.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dbscan::{cluster_count, dbscan};
use super::stats::{jaccard, Summary};
use super::FeatureConfig;
use crate::dictionary::{count_syllables, Dictionary};
use crate::lexical::{extract_blocks, LexicalProfile, TextBlock};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TfFeatures {
    pub cic: f64,
    pub cic_syn: f64,
    pub itid_min: f64,
    pub itid_avg: f64,
    pub itid_max: f64,
    pub nmi_min: f64,
    pub nmi_avg: f64,
    pub nmi_max: f64,
    pub cr: f64,
    pub nm_avg: f64,
    pub nm_max: f64,
    pub tc_min: f64,
    pub tc_avg: f64,
    pub tc_max: f64,
    pub noc: f64,
    pub noc_norm: f64,
}

impl TfFeatures {
    pub const NAMES: [&'static str; 16] = [
        "cic", "cic_syn", "itid_min", "itid_avg", "itid_max", "nmi_min", "nmi_avg", "nmi_max", "cr",
        "nm_avg", "nm_max", "tc_min", "tc_avg", "tc_max", "noc", "noc_norm",
    ];

    pub fn values(&self) -> [f64; 16] {
        [
            self.cic, self.cic_syn, self.itid_min, self.itid_avg, self.itid_max, self.nmi_min,
            self.nmi_avg, self.nmi_max, self.cr, self.nm_avg, self.nm_max, self.tc_min, self.tc_avg,
            self.tc_max, self.noc, self.noc_norm,
        ]
    }
}

/// Jaccard overlap of comment and identifier terms, plain and synonym-expanded.
pub fn cic(profile: &LexicalProfile, dictionary: &Dictionary) -> (f64, f64) {
    cic_of(&profile.comment_terms, &profile.identifier_terms, dictionary)
}

pub fn cic_of(comment_terms: &BTreeSet<String>, identifier_terms: &BTreeSet<String>, dictionary: &Dictionary) -> (f64, f64) {
    let plain = jaccard(comment_terms, identifier_terms);
    let expanded = jaccard(
        &dictionary.expand_synonyms(comment_terms),
        &dictionary.expand_synonyms(identifier_terms),
    );
    (plain, expanded)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentifierSemantics {
    pub itid: Summary,
    pub nmi: Summary,
    pub nm: Summary,
}

/// Dictionary coverage, summed hypernym depth and mean sense count per identifier group.
pub fn identifier_semantics(profile: &LexicalProfile, dictionary: &Dictionary) -> IdentifierSemantics {
    group_semantics(&profile.identifier_groups(), dictionary)
}

pub fn group_semantics(groups: &[Vec<String>], dictionary: &Dictionary) -> IdentifierSemantics {
    let mut itid = Vec::with_capacity(groups.len());
    let mut nmi = Vec::with_capacity(groups.len());
    let mut nm = Vec::with_capacity(groups.len());
    for group in groups {
        let entries: Vec<_> = group.iter().map(|t| dictionary.lookup(t)).collect();
        let size = (entries.len() as f64).max(1.0);
        itid.push(entries.iter().filter(|e| e.in_dictionary).count() as f64 / size);
        nmi.push(entries.iter().map(|e| e.max_depth as f64).sum());
        nm.push(entries.iter().map(|e| e.senses as f64).sum::<f64>() / size);
    }
    IdentifierSemantics {
        itid: Summary::of(&itid),
        nmi: Summary::of(&nmi),
        nm: Summary::of(&nm),
    }
}

/// Word, sentence and syllable counts of free text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

pub fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphabetic)
}

pub fn text_counts(text: &str) -> TextCounts {
    let words: Vec<&str> = text.split_whitespace().filter(|w| is_word(w)).collect();
    let mut sentences = text
        .split(['.', '!', '?'])
        .filter(|s| s.split_whitespace().any(is_word))
        .count();
    if sentences == 0 && !words.is_empty() {
        sentences = 1;
    }
    TextCounts {
        words: words.len(),
        sentences,
        syllables: words.iter().map(|w| count_syllables(w)).sum(),
    }
}

/// Flesch reading ease; 0 when there are no words or sentences.
pub fn flesch_reading_ease(counts: TextCounts) -> f64 {
    if counts.words == 0 || counts.sentences == 0 {
        return 0.0;
    }
    let w = counts.words as f64;
    206.835 - 1.015 * (w / counts.sentences as f64) - 84.6 * (counts.syllables as f64 / w)
}

pub fn comment_readability(profile: &LexicalProfile) -> f64 {
    flesch_reading_ease(text_counts(&profile.comment_text()))
}

/// Jaccard similarity of every block pair `i < j`, in row-major order.
pub fn pairwise_coherence(blocks: &[TextBlock]) -> Vec<f64> {
    let mut values = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            values.push(jaccard(&blocks[i].tokens, &blocks[j].tokens));
        }
    }
    values
}

/// (min, avg, max) of the pairwise values; zeros with fewer than two blocks.
pub fn text_coherence(blocks: &[TextBlock]) -> (f64, f64, f64) {
    let s = Summary::of(&pairwise_coherence(blocks));
    (s.min, s.avg, s.max)
}

/// `1 - Jaccard` between two token sets.
pub fn token_distance<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    1.0 - jaccard(a, b)
}

/// Number of non-noise density clusters over valid lines, and that count per valid line.
pub fn concept_count(profile: &LexicalProfile, eps: f64, min_samples: usize) -> (f64, f64) {
    let sets: Vec<BTreeSet<&str>> = profile.valid_lines().map(|l| l.token_set()).collect();
    if sets.is_empty() {
        return (0.0, 0.0);
    }
    let labels = dbscan(sets.len(), eps, min_samples, |i, j| token_distance(&sets[i], &sets[j]));
    let noc = cluster_count(&labels) as f64;
    (noc, noc / sets.len() as f64)
}

pub fn compute_tf(profile: &LexicalProfile, dictionary: &Dictionary, config: &FeatureConfig) -> TfFeatures {
    let (cic, cic_syn) = cic(profile, dictionary);
    let sem = identifier_semantics(profile, dictionary);
    let (tc_min, tc_avg, tc_max) = text_coherence(&extract_blocks(profile));
    let (noc, noc_norm) = concept_count(profile, config.dbscan_eps, config.dbscan_min_samples);
    TfFeatures {
        cic,
        cic_syn,
        itid_min: sem.itid.min,
        itid_avg: sem.itid.avg,
        itid_max: sem.itid.max,
        nmi_min: sem.nmi.min,
        nmi_avg: sem.nmi.avg,
        nmi_max: sem.nmi.max,
        cr: comment_readability(profile),
        nm_avg: sem.nm.avg,
        nm_max: sem.nm.max,
        tc_min,
        tc_avg,
        tc_max,
        noc,
        noc_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Language, Snippet};
    use crate::lexical::{tokenize, LanguageProfile};

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn py(src: &str) -> LexicalProfile {
        let s = Snippet::load(src, Language::Python, "t").preprocess();
        tokenize(&s, &LanguageProfile::builtin(Language::Python))
    }

    fn block(tokens: &[&str]) -> TextBlock {
        TextBlock {
            first_line: 1,
            last_line: 1,
            tokens: set(tokens),
        }
    }

    #[test]
    fn cic_set_arithmetic() {
        let d = Dictionary::fallback();
        let (c, syn) = cic_of(&set(&["compute", "sum"]), &set(&["sum", "total"]), &d);
        assert!((c - 1.0 / 3.0).abs() < 1e-12);
        // no synonyms in the word-list backend
        assert_eq!(c, syn);
        assert_eq!(cic_of(&set(&["a", "b"]), &set(&["a", "b"]), &d).0, 1.0);
        assert_eq!(cic_of(&set(&[]), &set(&["x"]), &d).0, 0.0);
        assert_eq!(cic_of(&set(&[]), &set(&[]), &d), (0.0, 0.0));
    }

    #[test]
    fn semantics_out_of_dictionary_and_empty() {
        let d = Dictionary::fallback();
        let s = group_semantics(&[vec!["qqzx".to_string()]], &d);
        assert_eq!((s.itid.avg, s.nmi.max, s.nm.max), (0.0, 0.0, 0.0));
        let none = group_semantics(&[], &d);
        assert_eq!(none, IdentifierSemantics::default());
    }

    #[test]
    fn flesch_hand_values() {
        let c = text_counts("The cat sat.");
        assert_eq!(c, TextCounts { words: 3, sentences: 1, syllables: 3 });
        assert!((flesch_reading_ease(c) - 119.19).abs() < 1e-9);
        let c = TextCounts { words: 5, sentences: 1, syllables: 7 };
        assert!((flesch_reading_ease(c) - 83.32).abs() < 1e-9);
        assert_eq!(flesch_reading_ease(TextCounts::default()), 0.0);
    }

    #[test]
    fn sentences_default_to_one() {
        let c = text_counts("compute the running total");
        assert_eq!((c.words, c.sentences), (4, 1));
        assert_eq!(text_counts("Stop! Go? Now.").sentences, 3);
        assert_eq!(text_counts("... --- 42").words, 0);
    }

    #[test]
    fn comment_readability_from_snippet() {
        assert_eq!(comment_readability(&py("x = 1")), 0.0);
        let cr = comment_readability(&py("# The cat sat.\nx = 1"));
        assert!((cr - 119.19).abs() < 1e-9);
    }

    #[test]
    fn coherence_cases() {
        assert_eq!(text_coherence(&[block(&["a"]), block(&["a"])]), (1.0, 1.0, 1.0));
        assert_eq!(text_coherence(&[block(&["a"]), block(&["b"])]), (0.0, 0.0, 0.0));
        assert_eq!(text_coherence(&[block(&["a"])]), (0.0, 0.0, 0.0));
        // J01 = 0, J02 = 2/4, J12 = 1/4
        let blocks = [block(&["a", "b"]), block(&["c"]), block(&["a", "b", "c", "d"])];
        assert_eq!(pairwise_coherence(&blocks), [0.0, 0.5, 0.25]);
        let (min, avg, max) = text_coherence(&blocks);
        assert_eq!((min, max), (0.0, 0.5));
        assert!((avg - 0.25).abs() < 1e-12);
    }

    #[test]
    fn coherence_aggregates_pair_values() {
        let s = Summary::of(&[1.0, 0.0, 0.5]);
        assert_eq!((s.min, s.avg, s.max), (0.0, 0.5, 1.0));
    }

    #[test]
    fn concept_count_examples() {
        assert_eq!(concept_count(&py("x = y\nx = y"), 0.5, 2), (1.0, 0.5));
        assert_eq!(concept_count(&py("x = y"), 0.5, 2), (0.0, 0.0));
        assert_eq!(concept_count(&py(""), 0.5, 2), (0.0, 0.0));
        assert_eq!(concept_count(&py("# only a comment"), 0.5, 2), (0.0, 0.0));
    }

    #[test]
    fn empty_snippet_is_all_zero() {
        let f = compute_tf(&py(""), &Dictionary::fallback(), &FeatureConfig::default());
        assert_eq!(f, TfFeatures::default());
    }
}
