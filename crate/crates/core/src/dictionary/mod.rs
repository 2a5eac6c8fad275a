//! Lexical-semantic lookups backing the textual features.
//!
//! Two backends share one interface. A WordNet-format database gives real
//! sense counts, hypernym depths and synonym sets. Without one, a bundled
//! English word list (derived from WordNet 3.0 lemmas, see
//! `data/WORDNET_LICENSE`) answers membership only: known words get one sense
//! and depth one, and nothing has synonyms.

mod syllables;
mod wordnet;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub use syllables::count_syllables;
pub use wordnet::{PartOfSpeech, WordNet};

const FALLBACK_WORDS: &str = include_str!("../../data/fallback_words.txt");

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("cannot read dictionary file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexEntry {
    pub term: String,
    pub in_dictionary: bool,
    pub senses: usize,
    pub max_depth: usize,
    pub synonyms: BTreeSet<String>,
}

impl LexEntry {
    fn absent(term: &str) -> LexEntry {
        LexEntry {
            term: term.to_string(),
            in_dictionary: false,
            senses: 0,
            max_depth: 0,
            synonyms: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone)]
enum Backend {
    WordNet(Box<WordNet>),
    WordList,
}

#[derive(Debug, Clone)]
pub struct Dictionary {
    backend: Backend,
    words: HashSet<String>,
}

impl Default for Dictionary {
    fn default() -> Self {
        Dictionary::fallback()
    }
}

impl Dictionary {
    /// The bundled word list.
    pub fn fallback() -> Dictionary {
        Dictionary::from_words(FALLBACK_WORDS.lines())
    }

    pub fn from_words<I, S>(words: I) -> Dictionary
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        Dictionary {
            backend: Backend::WordList,
            words,
        }
    }

    pub fn wordnet(dir: &Path) -> Result<Dictionary, DictionaryError> {
        let wn = WordNet::open(dir)?;
        Ok(Dictionary {
            backend: Backend::WordNet(Box::new(wn)),
            words: FALLBACK_WORDS.lines().map(str::to_string).collect(),
        })
    }

    /// WordNet at `path` when given, the bundled list otherwise.
    pub fn open(path: Option<&Path>) -> Result<Dictionary, DictionaryError> {
        match path {
            Some(dir) => Dictionary::wordnet(dir),
            None => Ok(Dictionary::fallback()),
        }
    }

    /// Short description recorded in model provenance.
    pub fn describe(&self) -> String {
        match &self.backend {
            Backend::WordNet(wn) => format!("wordnet:{} ({} lemmas)", wn.dir().display(), wn.lemma_count()),
            Backend::WordList => format!("wordlist ({} words)", self.words.len()),
        }
    }

    pub fn lookup(&self, term: &str) -> LexEntry {
        if term.is_empty() {
            return LexEntry::absent(term);
        }
        match &self.backend {
            Backend::WordNet(wn) => {
                if !wn.contains(term) {
                    return LexEntry::absent(term);
                }
                LexEntry {
                    term: term.to_string(),
                    in_dictionary: true,
                    senses: wn.senses(term),
                    max_depth: wn.max_depth(term),
                    synonyms: wn.synonyms(term),
                }
            }
            Backend::WordList => {
                if !self.words.contains(term) {
                    return LexEntry::absent(term);
                }
                LexEntry {
                    term: term.to_string(),
                    in_dictionary: true,
                    senses: 1,
                    max_depth: 1,
                    synonyms: BTreeSet::new(),
                }
            }
        }
    }

    pub fn contains(&self, term: &str) -> bool {
        match &self.backend {
            Backend::WordNet(wn) => wn.contains(term),
            Backend::WordList => self.words.contains(term),
        }
    }

    /// `terms` together with every synonym of every term (one step, not transitive).
    pub fn expand_synonyms(&self, terms: &BTreeSet<String>) -> BTreeSet<String> {
        let mut out = terms.clone();
        if let Backend::WordNet(wn) = &self.backend {
            for t in terms {
                out.extend(wn.synonyms(t));
            }
        }
        out
    }

    pub fn is_english(&self, term: &str) -> bool {
        if term.is_empty() {
            return false;
        }
        let lower = term.to_lowercase();
        self.contains(&lower) || self.words.contains(&lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fallback_membership() {
        let d = Dictionary::fallback();
        assert!(d.is_english("value"));
        assert!(!d.is_english("xyzzy"));
        assert!(!d.is_english(""));
        assert!(d.is_english("Value"));
    }

    #[test]
    fn fallback_entries() {
        let d = Dictionary::fallback();
        let dog = d.lookup("dog");
        assert!(dog.in_dictionary);
        assert_eq!((dog.senses, dog.max_depth), (1, 1));
        assert_eq!(d.lookup("qqzx"), LexEntry::absent("qqzx"));
        assert!(!d.lookup("").in_dictionary);
    }

    #[test]
    fn expansion_without_synonyms_is_identity() {
        let d = Dictionary::fallback();
        let empty = BTreeSet::new();
        assert!(d.expand_synonyms(&empty).is_empty());
        let one: BTreeSet<String> = ["qqzx".to_string()].into();
        assert_eq!(d.expand_synonyms(&one), one);
    }

    #[test]
    fn missing_database_is_an_init_error() {
        let err = Dictionary::wordnet(Path::new("/nonexistent/wordnet")).unwrap_err();
        assert!(matches!(err, DictionaryError::Io { .. }));
    }
}
