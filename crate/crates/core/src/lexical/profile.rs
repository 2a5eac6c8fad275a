use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::corpus::Language;

const PYTHON: &str = include_str!("../../profiles/python.toml");
const JAVA: &str = include_str!("../../profiles/java.toml");
const CUDA: &str = include_str!("../../profiles/cuda.toml");

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("cannot read language profile {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed language profile: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("language profile `{name}`: {message}")]
    Invalid { name: String, message: String },
}

/// Lexical rules for one language: keyword sets, comment and string delimiters.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct LanguageProfile {
    pub name: String,
    pub keywords: BTreeSet<String>,
    #[serde(default)]
    pub builtins: BTreeSet<String>,
    #[serde(default)]
    pub line_comments: Vec<String>,
    #[serde(default)]
    pub block_comments: Vec<(String, String)>,
    #[serde(default)]
    pub string_delims: Vec<String>,
    /// Delimiters whose literals may span lines.
    #[serde(default)]
    pub multiline_strings: Vec<String>,
    /// String delimiters that open a comment when they start a line.
    #[serde(default)]
    pub docstring_delims: Vec<String>,
    #[serde(default)]
    pub string_prefixes: Vec<String>,
    #[serde(default)]
    pub branch_keywords: BTreeSet<String>,
    #[serde(default)]
    pub loop_keywords: BTreeSet<String>,
}

impl LanguageProfile {
    pub fn from_toml(text: &str) -> Result<LanguageProfile, ProfileError> {
        let mut profile: LanguageProfile = toml::from_str(text)?;
        profile.normalize();
        profile.validate()?;
        Ok(profile)
    }

    pub fn from_file(path: &Path) -> Result<LanguageProfile, ProfileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Built-in profile; `Generic` reuses the Python rules.
    pub fn builtin(language: Language) -> LanguageProfile {
        let text = match language {
            Language::Python | Language::Generic => PYTHON,
            Language::Java => JAVA,
            Language::Cuda => CUDA,
        };
        let mut profile = Self::from_toml(text).expect("bundled profiles are valid");
        if language == Language::Generic {
            profile.name = "generic".to_string();
        }
        profile
    }

    // longest delimiters first so `"""` wins over `"`
    fn normalize(&mut self) {
        let by_len_desc = |v: &mut Vec<String>| v.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        by_len_desc(&mut self.line_comments);
        by_len_desc(&mut self.string_delims);
        by_len_desc(&mut self.string_prefixes);
        self.block_comments
            .sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.cmp(b)));
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let invalid = |message: String| ProfileError::Invalid {
            name: self.name.clone(),
            message,
        };
        if self.keywords.is_empty() {
            return Err(invalid("keyword set is empty".into()));
        }
        let mut openers: Vec<&str> = Vec::new();
        openers.extend(self.line_comments.iter().map(String::as_str));
        openers.extend(self.block_comments.iter().map(|(o, _)| o.as_str()));
        for (i, a) in openers.iter().enumerate() {
            if a.is_empty() {
                return Err(invalid("empty comment delimiter".into()));
            }
            for s in &self.string_delims {
                if s.starts_with(a) || a.starts_with(s.as_str()) {
                    return Err(invalid(format!("comment delimiter `{a}` overlaps string delimiter `{s}`")));
                }
            }
            for b in &openers[i + 1..] {
                if a == b {
                    return Err(invalid(format!("comment delimiter `{a}` declared twice")));
                }
            }
        }
        for d in self.multiline_strings.iter().chain(&self.docstring_delims) {
            if !self.string_delims.contains(d) {
                return Err(invalid(format!("`{d}` is not a declared string delimiter")));
            }
        }
        Ok(())
    }

    pub fn is_keyword(&self, word: &str) -> bool {
        self.keywords.contains(word)
    }

    pub fn is_builtin(&self, word: &str) -> bool {
        self.builtins.contains(word)
    }
}
