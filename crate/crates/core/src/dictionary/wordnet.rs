//! Reader for the WordNet 3.x database format (`index.<pos>` / `data.<pos>`).
//!
//! Everything is parsed eagerly at open time; lookups afterwards are pure
//! map reads. Only the pieces needed here are kept: lemma-to-synset index,
//! synset member words, and the maximum hypernym depth of each noun and verb
//! synset.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use super::DictionaryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 4] = [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adjective,
        PartOfSpeech::Adverb,
    ];

    fn file_suffix(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adjective => "adj",
            PartOfSpeech::Adverb => "adv",
        }
    }

    fn from_symbol(s: &str) -> Option<PartOfSpeech> {
        match s {
            "n" => Some(PartOfSpeech::Noun),
            "v" => Some(PartOfSpeech::Verb),
            "a" | "s" => Some(PartOfSpeech::Adjective),
            "r" => Some(PartOfSpeech::Adverb),
            _ => None,
        }
    }
}

type SynsetKey = (PartOfSpeech, u64);

#[derive(Debug, Clone)]
struct Synset {
    words: Vec<String>,
    hypernyms: Vec<SynsetKey>,
}

#[derive(Debug, Clone)]
pub struct WordNet {
    dir: PathBuf,
    index: HashMap<String, Vec<SynsetKey>>,
    synsets: HashMap<SynsetKey, Synset>,
    depths: HashMap<SynsetKey, usize>,
}

fn parse_error(file: &Path, line: usize, message: impl Into<String>) -> DictionaryError {
    DictionaryError::Malformed {
        file: file.display().to_string(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, DictionaryError> {
    fs::read_to_string(path).map_err(|source| DictionaryError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Lowercased member word, with adjective markers like `(a)` removed.
fn normalize_word(raw: &str) -> String {
    let word = raw.split('(').next().unwrap_or(raw);
    word.to_lowercase()
}

impl WordNet {
    pub fn open(dir: &Path) -> Result<WordNet, DictionaryError> {
        let mut index: HashMap<String, Vec<SynsetKey>> = HashMap::new();
        let mut synsets = HashMap::new();
        for pos in PartOfSpeech::ALL {
            let index_path = dir.join(format!("index.{}", pos.file_suffix()));
            let text = read(&index_path)?;
            parse_index(&text, pos, &index_path, &mut index)?;
            let data_path = dir.join(format!("data.{}", pos.file_suffix()));
            let text = read(&data_path)?;
            parse_data(&text, pos, &data_path, &mut synsets)?;
        }
        let depths = hypernym_depths(&synsets);
        Ok(WordNet {
            dir: dir.to_path_buf(),
            index,
            synsets,
            depths,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn lemma_count(&self) -> usize {
        self.index.len()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    /// Total number of synsets across parts of speech.
    pub fn senses(&self, term: &str) -> usize {
        self.index.get(term).map_or(0, Vec::len)
    }

    /// Longest hypernym chain over the term's noun and verb synsets.
    pub fn max_depth(&self, term: &str) -> usize {
        self.index
            .get(term)
            .into_iter()
            .flatten()
            .filter_map(|key| self.depths.get(key))
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Single-word lemmas sharing a synset with `term`, excluding the term itself.
    pub fn synonyms(&self, term: &str) -> BTreeSet<String> {
        self.index
            .get(term)
            .into_iter()
            .flatten()
            .filter_map(|key| self.synsets.get(key))
            .flat_map(|s| s.words.iter())
            .filter(|w| w.as_str() != term && !w.contains('_'))
            .cloned()
            .collect()
    }
}

fn parse_index(
    text: &str,
    pos: PartOfSpeech,
    path: &Path,
    index: &mut HashMap<String, Vec<SynsetKey>>,
) -> Result<(), DictionaryError> {
    for (n, line) in text.lines().enumerate() {
        // license header lines start with two spaces
        if line.starts_with(' ') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |m: &str| parse_error(path, n + 1, m);
        if fields.len() < 6 {
            return Err(err("too few fields"));
        }
        let synset_cnt: usize = fields[2].parse().map_err(|_| err("bad synset_cnt"))?;
        let p_cnt: usize = fields[3].parse().map_err(|_| err("bad p_cnt"))?;
        let offsets_at = 4 + p_cnt + 2;
        if fields.len() < offsets_at + synset_cnt {
            return Err(err("truncated synset offsets"));
        }
        let keys = index.entry(fields[0].to_lowercase()).or_default();
        for field in &fields[offsets_at..offsets_at + synset_cnt] {
            let offset: u64 = field.parse().map_err(|_| err("bad synset offset"))?;
            keys.push((pos, offset));
        }
    }
    Ok(())
}

fn parse_data(
    text: &str,
    pos: PartOfSpeech,
    path: &Path,
    synsets: &mut HashMap<SynsetKey, Synset>,
) -> Result<(), DictionaryError> {
    for (n, line) in text.lines().enumerate() {
        if line.starts_with(' ') || line.trim().is_empty() {
            continue;
        }
        let err = |m: &str| parse_error(path, n + 1, m);
        let head = line.split(" | ").next().unwrap_or(line);
        let fields: Vec<&str> = head.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(err("too few fields"));
        }
        let offset: u64 = fields[0].parse().map_err(|_| err("bad offset"))?;
        let w_cnt = usize::from_str_radix(fields[3], 16).map_err(|_| err("bad w_cnt"))?;
        let words_end = 4 + 2 * w_cnt;
        if fields.len() <= words_end {
            return Err(err("truncated word list"));
        }
        let words = (0..w_cnt).map(|i| normalize_word(fields[4 + 2 * i])).collect();
        let p_cnt: usize = fields[words_end].parse().map_err(|_| err("bad p_cnt"))?;
        let mut hypernyms = Vec::new();
        for i in 0..p_cnt {
            let at = words_end + 1 + 4 * i;
            if fields.len() < at + 4 {
                return Err(err("truncated pointer list"));
            }
            if fields[at] == "@" || fields[at] == "@i" {
                let target: u64 = fields[at + 1].parse().map_err(|_| err("bad pointer offset"))?;
                if let Some(tpos) = PartOfSpeech::from_symbol(fields[at + 2]) {
                    hypernyms.push((tpos, target));
                }
            }
        }
        synsets.insert((pos, offset), Synset { words, hypernyms });
    }
    Ok(())
}

fn hypernym_depths(synsets: &HashMap<SynsetKey, Synset>) -> HashMap<SynsetKey, usize> {
    let mut depths: HashMap<SynsetKey, usize> = HashMap::new();
    let mut keys: Vec<SynsetKey> = synsets
        .keys()
        .filter(|(pos, _)| matches!(pos, PartOfSpeech::Noun | PartOfSpeech::Verb))
        .copied()
        .collect();
    keys.sort();
    for key in keys {
        depth_of(key, synsets, &mut depths, &mut Vec::new());
    }
    depths
}

fn depth_of(
    key: SynsetKey,
    synsets: &HashMap<SynsetKey, Synset>,
    memo: &mut HashMap<SynsetKey, usize>,
    stack: &mut Vec<SynsetKey>,
) -> usize {
    if let Some(&d) = memo.get(&key) {
        return d;
    }
    // a cycle would be a database defect; treat the back edge as a root
    if stack.contains(&key) {
        return 0;
    }
    stack.push(key);
    let depth = synsets
        .get(&key)
        .map(|s| s.hypernyms.clone())
        .unwrap_or_default()
        .into_iter()
        .filter(|h| synsets.contains_key(h))
        .map(|h| 1 + depth_of(h, synsets, memo, stack))
        .max()
        .unwrap_or(0);
    stack.pop();
    memo.insert(key, depth);
    depth
}
