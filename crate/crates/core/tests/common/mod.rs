//! Seeded generator of readable and unreadable code snippets.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coderead_core::corpus::{LabeledDataset, LabeledEntry};
use coderead_core::{Language, Snippet};

const NOUNS: &[&str] = &[
    "total", "count", "value", "index", "name", "result", "price", "order", "item", "record", "buffer",
    "length", "offset", "score", "user", "message", "table", "window", "number", "average",
];
const VERBS: &[&str] = &["compute", "update", "read", "write", "find", "load", "check", "build", "merge", "sort"];
const COMMENTS: &[&str] = &[
    "compute the total of every item",
    "return the average score",
    "update the record with the new value",
    "find the index of the first match",
    "check that the buffer is not empty",
    "merge the two tables by name",
];

fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).copied().expect("non-empty word list")
}

/// A short, commented, evenly indented Python function.
pub fn readable(rng: &mut ChaCha8Rng) -> String {
    let verb = pick(rng, VERBS);
    let noun = pick(rng, NOUNS);
    let other = pick(rng, NOUNS);
    let mut out = format!("def {verb}_{noun}(items):\n");
    out += &format!("    # {}\n", pick(rng, COMMENTS));
    out += &format!("    {noun} = 0\n");
    out += "    for item in items:\n";
    out += &format!("        {noun} = {noun} + item.{other}\n");
    if rng.gen_bool(0.6) {
        out += "\n";
        out += &format!("    # {}\n", pick(rng, COMMENTS));
        out += &format!("    if {noun} > 0:\n");
        out += &format!("        return {noun}\n");
    }
    out += &format!("    return {noun}\n");
    out
}

/// A dense, uncommented Python fragment with cryptic names and long lines.
pub fn unreadable(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    let lines = rng.gen_range(3..7);
    for i in 0..lines {
        let depth = rng.gen_range(0..4);
        let indent = " ".repeat(depth * rng.gen_range(1..4));
        let mut expr = String::new();
        for k in 0..rng.gen_range(4..9) {
            let a = (b'a' + rng.gen_range(0..26u8)) as char;
            let b = rng.gen_range(0..99);
            let op = pick(rng, &["+", "*", "-", "%", "//", "^"]);
            expr += &format!("{a}{k}[{b}]{op}");
        }
        expr += "1";
        out += &format!("{indent}q{i}=({expr});z{i}=f(q{i},{},{})\n", rng.gen_range(0..9), rng.gen_range(0..9));
    }
    out
}

/// `n` labeled snippets, alternating readable (1) and unreadable (0).
pub fn labeled_dataset(n: usize, seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n)
        .map(|i| {
            let label = (i % 2 == 0) as u8;
            let text = if label == 1 { readable(&mut rng) } else { unreadable(&mut rng) };
            LabeledEntry {
                snippet: Snippet::load(&text, Language::Python, format!("s{i:04}")).preprocess(),
                label,
            }
        })
        .collect();
    LabeledDataset {
        entries,
        provenance: format!("synthetic(n={n}, seed={seed})"),
    }
}

/// Paired corpora sharing ids: A readable, B unreadable.
pub fn paired_corpora(n: usize, seed: u64) -> (Vec<Snippet>, Vec<Snippet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let id = format!("p{i:04}");
            let a = Snippet::load(&readable(&mut rng), Language::Python, id.clone()).preprocess();
            let b = Snippet::load(&unreadable(&mut rng), Language::Python, id).preprocess();
            (a, b)
        })
        .unzip()
}
