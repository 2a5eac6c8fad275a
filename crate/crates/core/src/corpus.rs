//! Snippet ingestion, light normalization and labeled-dataset manifests.
//!
//! Normalization is deliberately shallow: line endings are unified, a UTF-8
//! byte-order mark is dropped and outer blank lines are trimmed. Everything
//! that carries layout (indentation, inner blank lines, comment placement)
//! is kept byte-for-byte because the visual features depend on it.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BOM: char = '\u{feff}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Python,
    Java,
    Cuda,
    Generic,
}

impl Language {
    pub const ALL: [Language; 4] = [
        Language::Python,
        Language::Java,
        Language::Cuda,
        Language::Generic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Python => "python",
            Language::Java => "java",
            Language::Cuda => "cuda",
            Language::Generic => "generic",
        }
    }

    /// Guess the language from a file extension; unknown extensions map to `Generic`.
    pub fn from_path(path: &Path) -> Language {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("py") | Some("pyw") => Language::Python,
            Some("java") => Language::Java,
            Some("cu") | Some("cuh") => Language::Cuda,
            _ => Language::Generic,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "python" | "py" => Ok(Language::Python),
            "java" => Ok(Language::Java),
            "cuda" | "cu" => Ok(Language::Cuda),
            "generic" => Ok(Language::Generic),
            other => Err(CorpusError::UnknownLanguage(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid UTF-8 in {id} at byte offset {offset}")]
    Decode { id: String, offset: usize },
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("manifest {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("manifest row {row}: {message}")]
    Row { row: usize, message: String },
}

/// A unit of analysis: the text of one code fragment split into lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    pub id: String,
    pub language: Language,
    pub lines: Vec<String>,
    /// Text with normalized line endings; `lines.join("\n")` up to a final terminator.
    pub raw_text: String,
}

fn normalize_line_endings(text: &str) -> String {
    text.replace("\r\n", "\n").replace('\r', "\n")
}

fn split_lines(text: &str) -> Vec<String> {
    if text.is_empty() {
        return Vec::new();
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    body.split('\n').map(str::to_string).collect()
}

fn is_blank(line: &str) -> bool {
    line.chars().all(char::is_whitespace)
}

impl Snippet {
    /// Split already-decoded text into lines. No trimming is done here.
    pub fn load(source_text: &str, language: Language, id: impl Into<String>) -> Snippet {
        let raw_text = normalize_line_endings(source_text);
        let lines = split_lines(&raw_text);
        Snippet {
            id: id.into(),
            language,
            lines,
            raw_text,
        }
    }

    /// Decode raw bytes. A leading BOM is removed; any other invalid sequence is an error.
    pub fn from_bytes(
        bytes: &[u8],
        language: Language,
        id: impl Into<String>,
    ) -> Result<Snippet, CorpusError> {
        let id = id.into();
        let bytes = bytes.strip_prefix(&[0xEF, 0xBB, 0xBF]).unwrap_or(bytes);
        match std::str::from_utf8(bytes) {
            Ok(text) => Ok(Snippet::load(text, language, id)),
            Err(e) => Err(CorpusError::Decode {
                id,
                offset: e.valid_up_to(),
            }),
        }
    }

    pub fn read_file(path: &Path, language: Language, id: impl Into<String>) -> Result<Snippet, CorpusError> {
        let bytes = fs::read(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Snippet::from_bytes(&bytes, language, id)
    }

    /// Normalize: drop BOM artifacts and trim leading/trailing blank lines.
    pub fn preprocess(&self) -> Snippet {
        let mut start = 0;
        let mut first = None;
        // a BOM can only open the text; one left behind blank lines is an artifact too
        while start < self.lines.len() {
            let line = self.lines[start].trim_start_matches(BOM);
            if !is_blank(line) {
                first = Some(line.to_string());
                break;
            }
            start += 1;
        }
        let lines = match first {
            None => Vec::new(),
            Some(first) => {
                let end = self.lines.iter().rposition(|l| !is_blank(l)).unwrap_or(start).max(start);
                std::iter::once(first)
                    .chain(self.lines[start + 1..=end].iter().cloned())
                    .collect()
            }
        };
        let raw_text = lines.join("\n");
        Snippet {
            id: self.id.clone(),
            language: self.language,
            lines,
            raw_text,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledEntry {
    pub snippet: Snippet,
    /// 1 = readable, 0 = unreadable.
    pub label: u8,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledDataset {
    pub entries: Vec<LabeledEntry>,
    pub provenance: String,
}

#[derive(Debug, Deserialize, Serialize)]
struct ManifestRow {
    id: String,
    path: String,
    language: String,
    label: String,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.entries.iter().map(|e| e.label).collect()
    }

    pub fn snippets(&self) -> impl Iterator<Item = &Snippet> {
        self.entries.iter().map(|e| &e.snippet)
    }

    /// Load a CSV manifest with header `id,path,language,label`.
    ///
    /// Paths are resolved relative to the manifest's directory. Rows are
    /// numbered from 1 (the header is row 0) in error messages.
    pub fn load(manifest_path: &Path) -> Result<LabeledDataset, CorpusError> {
        let base = manifest_path.parent().unwrap_or(Path::new("."));
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(manifest_path)
            .map_err(|source| CorpusError::Csv {
                path: manifest_path.to_path_buf(),
                source,
            })?;

        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (i, record) in reader.deserialize::<ManifestRow>().enumerate() {
            let row = i + 1;
            let record = record.map_err(|e| CorpusError::Row {
                row,
                message: e.to_string(),
            })?;
            let label = match record.label.as_str() {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(CorpusError::Row {
                        row,
                        message: format!("label must be 0 or 1, got `{other}`"),
                    })
                }
            };
            if !seen.insert(record.id.clone()) {
                return Err(CorpusError::Row {
                    row,
                    message: format!("duplicate id `{}`", record.id),
                });
            }
            let language: Language = record.language.parse().map_err(|e: CorpusError| {
                CorpusError::Row {
                    row,
                    message: e.to_string(),
                }
            })?;
            let path = base.join(&record.path);
            let bytes = fs::read(&path).map_err(|e| CorpusError::Row {
                row,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            let snippet = Snippet::from_bytes(&bytes, language, record.id.clone())
                .map_err(|e| CorpusError::Row {
                    row,
                    message: e.to_string(),
                })?
                .preprocess();
            entries.push(LabeledEntry { snippet, label });
        }
        if entries.is_empty() {
            log::warn!("manifest {} has no rows", manifest_path.display());
        }
        Ok(LabeledDataset {
            entries,
            provenance: manifest_path.display().to_string(),
        })
    }

    /// Write every snippet to `<dir>/snippets/<n>.txt` plus `<dir>/manifest.csv`.
    pub fn save(&self, dir: &Path) -> Result<PathBuf, CorpusError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CorpusError::Io { path, source }
        };
        let snippet_dir = dir.join("snippets");
        fs::create_dir_all(&snippet_dir).map_err(io_err(&snippet_dir))?;
        let manifest = dir.join("manifest.csv");
        let mut writer = csv::Writer::from_path(&manifest).map_err(|source| CorpusError::Csv {
            path: manifest.clone(),
            source,
        })?;
        if self.entries.is_empty() {
            writer
                .write_record(["id", "path", "language", "label"])
                .map_err(|source| CorpusError::Csv {
                    path: manifest.clone(),
                    source,
                })?;
        }
        for (n, entry) in self.entries.iter().enumerate() {
            let rel = format!("snippets/{n:05}.txt");
            let path = dir.join(&rel);
            fs::write(&path, &entry.snippet.raw_text).map_err(io_err(&path))?;
            writer
                .serialize(ManifestRow {
                    id: entry.snippet.id.clone(),
                    path: rel,
                    language: entry.snippet.language.to_string(),
                    label: entry.label.to_string(),
                })
                .map_err(|source| CorpusError::Csv {
                    path: manifest.clone(),
                    source,
                })?;
        }
        writer.flush().map_err(io_err(&manifest))?;
        Ok(manifest)
    }
}

/// One source file to be read, as listed by a directory walk or a manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceItem {
    pub id: String,
    pub path: PathBuf,
    pub language: Language,
    pub label: Option<u8>,
}

impl SourceItem {
    /// Read, decode and preprocess the file.
    pub fn load(&self) -> Result<Snippet, CorpusError> {
        Ok(Snippet::read_file(&self.path, self.language, self.id.clone())?.preprocess())
    }
}

#[derive(Debug, Deserialize)]
struct SourceRow {
    id: String,
    path: String,
    language: String,
    #[serde(default)]
    label: Option<String>,
}

/// List the rows of an `id,path,language[,label]` manifest without reading the files.
pub fn list_manifest(manifest_path: &Path) -> Result<Vec<SourceItem>, CorpusError> {
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(manifest_path)
        .map_err(|source| CorpusError::Csv {
            path: manifest_path.to_path_buf(),
            source,
        })?;
    let mut items = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in reader.deserialize::<SourceRow>().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CorpusError::Row {
            row,
            message: e.to_string(),
        })?;
        let label = match record.label.as_deref() {
            None | Some("") => None,
            Some("0") => Some(0),
            Some("1") => Some(1),
            Some(other) => {
                return Err(CorpusError::Row {
                    row,
                    message: format!("label must be 0 or 1, got `{other}`"),
                })
            }
        };
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::Row {
                row,
                message: format!("duplicate id `{}`", record.id),
            });
        }
        let language = record.language.parse().map_err(|e: CorpusError| CorpusError::Row {
            row,
            message: e.to_string(),
        })?;
        items.push(SourceItem {
            id: record.id,
            path: base.join(&record.path),
            language,
            label,
        });
    }
    Ok(items)
}

/// Every non-hidden regular file under `dir`, sorted by relative path, which becomes the id.
///
/// `language` forces one language; otherwise it follows the file extension.
pub fn list_directory(dir: &Path, language: Option<Language>) -> Result<Vec<SourceItem>, CorpusError> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), CorpusError> {
        let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for entry in entries {
            let entry = entry.map_err(|source| CorpusError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
            if entry.file_name().to_string_lossy().starts_with('.') {
                continue;
            }
            let path = entry.path();
            if path.is_dir() {
                walk(&path, out)?;
            } else if path.is_file() {
                out.push(path);
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    walk(dir, &mut files)?;
    files.sort();
    Ok(files
        .into_iter()
        .map(|path| {
            let rel = path.strip_prefix(dir).unwrap_or(&path);
            let id = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            SourceItem {
                id,
                language: language.unwrap_or_else(|| Language::from_path(&path)),
                path,
                label: None,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines(s: &Snippet) -> Vec<&str> {
        s.lines.iter().map(String::as_str).collect()
    }

    #[test]
    fn load_normalizes_crlf() {
        let s = Snippet::load("a\r\nb", Language::Python, "s1");
        assert_eq!(lines(&s), ["a", "b"]);
        assert_eq!(s.raw_text, "a\nb");
    }

    #[test]
    fn load_empty() {
        assert!(Snippet::load("", Language::Python, "s2").lines.is_empty());
    }

    #[test]
    fn load_keeps_trailing_blanks() {
        let s = Snippet::load("x=1\n\n\n", Language::Python, "s3");
        assert_eq!(lines(&s), ["x=1", "", ""]);
        assert_eq!(lines(&s.preprocess()), ["x=1"]);
    }

    #[test]
    fn preprocess_trims_outer_blanks_only() {
        let s = Snippet::load("\nx=1\n", Language::Python, "a").preprocess();
        assert_eq!(lines(&s), ["x=1"]);
        let inner = Snippet::load("def f():\n\n    return 1", Language::Python, "b");
        assert_eq!(inner.preprocess().lines, inner.lines);
    }

    #[test]
    fn preprocess_strips_bom() {
        let s = Snippet::load("\u{feff}x=1", Language::Python, "bom").preprocess();
        assert_eq!(lines(&s), ["x=1"]);
        assert_eq!(s.lines[0].as_bytes(), b"x=1");
    }

    #[test]
    fn bom_bytes_are_dropped_on_decode() {
        let s = Snippet::from_bytes(b"\xEF\xBB\xBFy = 2\n", Language::Python, "b").unwrap();
        assert_eq!(lines(&s), ["y = 2"]);
    }

    #[test]
    fn decode_error_reports_offset() {
        let err = Snippet::from_bytes(b"ok\n\xFFbad", Language::Java, "bad").unwrap_err();
        match err {
            CorpusError::Decode { offset, .. } => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bom_after_blank_lines_is_stripped_once() {
        let s = Snippet::load("\n\u{feff}x", Language::Python, "b").preprocess();
        assert_eq!(lines(&s), ["x"]);
        assert_eq!(s.preprocess(), s);
        let only = Snippet::load("\n\u{feff}", Language::Python, "c").preprocess();
        assert!(only.is_empty());
    }

    #[test]
    fn all_blank_snippet_becomes_empty() {
        let s = Snippet::load("  \n\t\n", Language::Generic, "w").preprocess();
        assert!(s.is_empty());
        assert_eq!(s.raw_text, "");
    }

    #[test]
    fn language_from_extension() {
        assert_eq!(Language::from_path(Path::new("a/b.py")), Language::Python);
        assert_eq!(Language::from_path(Path::new("K.cu")), Language::Cuda);
        assert_eq!(Language::from_path(Path::new("Main.JAVA")), Language::Java);
        assert_eq!(Language::from_path(Path::new("x.rs")), Language::Generic);
    }
    #[test]
    fn directory_listing_is_sorted_and_relative() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("sub")).unwrap();
        fs::write(dir.path().join("b.py"), "x = 1").unwrap();
        fs::write(dir.path().join("sub/A.java"), "int x;").unwrap();
        fs::write(dir.path().join(".hidden"), "").unwrap();
        let items = list_directory(dir.path(), None).unwrap();
        let ids: Vec<&str> = items.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids, ["b.py", "sub/A.java"]);
        assert_eq!(items[1].language, Language::Java);
        let forced = list_directory(dir.path(), Some(Language::Cuda)).unwrap();
        assert!(forced.iter().all(|i| i.language == Language::Cuda));
    }

    #[test]
    fn manifest_label_is_optional() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.csv");
        fs::write(&m, "id,path,language\na,a.py,python\n").unwrap();
        let items = list_manifest(&m).unwrap();
        assert_eq!(items[0].label, None);
        assert_eq!(items[0].path, dir.path().join("a.py"));
        fs::write(&m, "id,path,language,label\na,a.py,python,2\n").unwrap();
        assert!(matches!(list_manifest(&m), Err(CorpusError::Row { row: 1, .. })));
    }
}
