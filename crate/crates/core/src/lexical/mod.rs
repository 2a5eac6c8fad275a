//! Language-aware lexical scanning.
//!
//! The scanner is line oriented and never builds a syntax tree, so it copes
//! with fragments that do not parse. State that crosses line boundaries
//! (block comments, multi-line strings, docstrings) is carried from one line
//! to the next. Everything the feature families need is collected in a single
//! [`LexicalProfile`].

mod profile;
mod split;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use profile::{LanguageProfile, ProfileError};
pub use split::{is_number, split_identifier, text_terms};

use crate::corpus::Snippet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TokenKind {
    Keyword,
    Identifier,
    Number,
    String,
    Operator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 0-based character column of the first character.
    pub col: usize,
}

const ASSIGNMENT_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=", "**=", "//=", ":=",
    "@=",
];
const ARITHMETIC_OPS: &[&str] = &["+", "-", "*", "/", "%", "**", "//", "++", "--"];
const COMPARISON_OPS: &[&str] = &["==", "!=", "<", ">", "<=", ">="];

// longest first
const MULTI_CHAR_OPS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "**=", "//=", "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||",
    "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", ":=", "<<", ">>", "**", "//",
];

pub fn is_assignment(op: &str) -> bool {
    ASSIGNMENT_OPS.contains(&op)
}

pub fn is_arithmetic(op: &str) -> bool {
    ARITHMETIC_OPS.contains(&op)
}

pub fn is_comparison(op: &str) -> bool {
    COMPARISON_OPS.contains(&op)
}

/// Per-line category tallies over code regions (strings and comments excluded).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LineCounts {
    pub identifiers: usize,
    pub keywords: usize,
    pub numbers: usize,
    pub parentheses: usize,
    pub brackets: usize,
    pub periods: usize,
    pub commas: usize,
    /// Space characters anywhere on the line.
    pub spaces: usize,
    pub assignments: usize,
    pub branches: usize,
    pub loops: usize,
    pub arithmetic: usize,
    pub comparisons: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineProfile {
    pub text: String,
    /// Length in characters.
    pub length: usize,
    pub leading_spaces: usize,
    pub leading_tabs: usize,
    pub blank: bool,
    pub has_comment: bool,
    pub tokens: Vec<Token>,
    pub counts: LineCounts,
    pub keyword_chars: usize,
    pub string_chars: usize,
    pub comment_chars: usize,
    pub assignment_columns: Vec<usize>,
    pub bracket_columns: Vec<usize>,
}

impl LineProfile {
    /// Indentation in space-equivalents.
    pub fn indent(&self, tab_width: usize) -> usize {
        self.leading_spaces + self.leading_tabs * tab_width
    }

    pub fn is_comment_only(&self) -> bool {
        self.has_comment && self.tokens.is_empty() && self.string_chars == 0
    }

    /// Non-blank and not comment-only.
    pub fn is_code(&self) -> bool {
        !self.blank && !self.is_comment_only()
    }

    /// Code line carrying at least one token.
    pub fn is_valid(&self) -> bool {
        self.is_code() && !self.tokens.is_empty()
    }

    pub fn token_set(&self) -> BTreeSet<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn char_vocab(&self) -> BTreeSet<char> {
        self.text.chars().collect()
    }

    pub fn identifiers(&self) -> impl Iterator<Item = &str> {
        self.tokens
            .iter()
            .filter(|t| t.kind == TokenKind::Identifier)
            .map(|t| t.text.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommentSegment {
    /// 1-based line index.
    pub line: usize,
    /// Comment text without delimiters.
    pub text: String,
}

/// Distinct and total operator/operand tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HalsteadCounts {
    pub distinct_operators: usize,
    pub distinct_operands: usize,
    pub total_operators: usize,
    pub total_operands: usize,
}

impl HalsteadCounts {
    pub fn vocabulary(&self) -> usize {
        self.distinct_operators + self.distinct_operands
    }

    pub fn length(&self) -> usize {
        self.total_operators + self.total_operands
    }
}

/// All lexical evidence extracted from one snippet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LexicalProfile {
    pub snippet_id: String,
    pub lines: Vec<LineProfile>,
    pub m: usize,
    pub m_blank: usize,
    pub m_ne: usize,
    pub m_code: usize,
    pub m_val: usize,
    pub m_comment: usize,
    pub comments: Vec<CommentSegment>,
    /// Identifier occurrences, with multiplicity, in reading order.
    pub identifiers: Vec<String>,
    /// Identifiers that are not language builtins.
    pub user_identifiers: Vec<String>,
    pub comment_terms: BTreeSet<String>,
    pub identifier_terms: BTreeSet<String>,
    pub halstead: HalsteadCounts,
    pub char_counts: BTreeMap<char, usize>,
    pub total_chars: usize,
    pub keyword_chars: usize,
    pub string_chars: usize,
    pub comment_chars: usize,
}

impl LexicalProfile {
    pub fn code_lines(&self) -> impl Iterator<Item = &LineProfile> {
        self.lines.iter().filter(|l| l.is_code())
    }

    pub fn valid_lines(&self) -> impl Iterator<Item = &LineProfile> {
        self.lines.iter().filter(|l| l.is_valid())
    }

    pub fn assignment_columns(&self) -> Vec<usize> {
        self.lines.iter().flat_map(|l| l.assignment_columns.iter().copied()).collect()
    }

    pub fn bracket_columns(&self) -> Vec<usize> {
        self.lines.iter().flat_map(|l| l.bracket_columns.iter().copied()).collect()
    }

    pub fn char_vocab(&self) -> BTreeSet<char> {
        self.char_counts.keys().copied().collect()
    }

    /// Concatenated comment text, one segment per line.
    pub fn comment_text(&self) -> String {
        self.comments
            .iter()
            .map(|c| c.text.trim())
            .filter(|t| !t.is_empty())
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Identifier-term groups: one group per line holding at least one identifier.
    pub fn identifier_groups(&self) -> Vec<Vec<String>> {
        self.lines
            .iter()
            .filter(|l| l.counts.identifiers > 0)
            .map(|l| {
                l.identifiers()
                    .flat_map(split_identifier)
                    .filter(|t| !is_number(t))
                    .collect()
            })
            .collect()
    }
}

/// Blank-line-delimited group of lines and its lexical token set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextBlock {
    /// 1-based inclusive line range.
    pub first_line: usize,
    pub last_line: usize,
    pub tokens: BTreeSet<String>,
}

pub fn extract_blocks(profile: &LexicalProfile) -> Vec<TextBlock> {
    let mut blocks = Vec::new();
    let mut current: Option<TextBlock> = None;
    for (i, line) in profile.lines.iter().enumerate() {
        if line.blank {
            blocks.extend(current.take());
            continue;
        }
        let block = current.get_or_insert_with(|| TextBlock {
            first_line: i + 1,
            last_line: i + 1,
            tokens: BTreeSet::new(),
        });
        block.last_line = i + 1;
        block.tokens.extend(line.tokens.iter().map(|t| t.text.clone()));
    }
    blocks.extend(current);
    blocks
}

/// Tokenize and extract blocks in one call.
pub fn snippet_blocks(snippet: &Snippet, profile: &LanguageProfile) -> Vec<TextBlock> {
    extract_blocks(&tokenize(snippet, profile))
}

#[derive(Debug, Clone)]
enum State {
    Code,
    BlockComment { close: String },
    String { delim: String, comment: bool },
}

struct LineScanner<'a> {
    profile: &'a LanguageProfile,
    chars: Vec<char>,
    line: LineProfile,
    comment_text: String,
}

fn starts_with_at(chars: &[char], i: usize, pat: &str) -> bool {
    let mut j = i;
    for pc in pat.chars() {
        if chars.get(j) != Some(&pc) {
            return false;
        }
        j += 1;
    }
    true
}

/// Index just past the closing delimiter, honoring backslash escapes.
fn find_string_end(chars: &[char], from: usize, delim: &str) -> Option<usize> {
    let n = delim.chars().count();
    let mut i = from;
    while i < chars.len() {
        if chars[i] == '\\' {
            i += 2;
            continue;
        }
        if starts_with_at(chars, i, delim) {
            return Some(i + n);
        }
        i += 1;
    }
    None
}

fn find_plain(chars: &[char], from: usize, pat: &str) -> Option<usize> {
    (from..chars.len()).find(|&i| starts_with_at(chars, i, pat))
}

impl<'a> LineScanner<'a> {
    fn new(profile: &'a LanguageProfile, text: &str) -> Self {
        let chars: Vec<char> = text.chars().collect();
        let leading_spaces = chars.iter().take_while(|c| **c == ' ' || **c == '\t').filter(|c| **c == ' ').count();
        let leading_tabs = chars.iter().take_while(|c| **c == ' ' || **c == '\t').filter(|c| **c == '\t').count();
        let line = LineProfile {
            text: text.to_string(),
            length: chars.len(),
            leading_spaces,
            leading_tabs,
            blank: chars.iter().all(|c| c.is_whitespace()),
            has_comment: false,
            tokens: Vec::new(),
            counts: LineCounts {
                spaces: chars.iter().filter(|c| **c == ' ').count(),
                ..LineCounts::default()
            },
            keyword_chars: 0,
            string_chars: 0,
            comment_chars: 0,
            assignment_columns: Vec::new(),
            bracket_columns: Vec::new(),
        };
        LineScanner {
            profile,
            chars,
            line,
            comment_text: String::new(),
        }
    }

    fn text(&self, from: usize, to: usize) -> String {
        self.chars[from..to].iter().collect()
    }

    fn add_comment(&mut self, from: usize, to: usize, content_from: usize, content_to: usize) {
        self.line.comment_chars += to - from;
        if !self.text(from, to).trim().is_empty() {
            self.line.has_comment = true;
        }
        let content = self.text(content_from.min(content_to), content_to);
        if !content.trim().is_empty() {
            if !self.comment_text.is_empty() {
                self.comment_text.push(' ');
            }
            self.comment_text.push_str(content.trim());
        }
    }

    fn push(&mut self, kind: TokenKind, from: usize, to: usize) {
        let text = self.text(from, to);
        let counts = &mut self.line.counts;
        match kind {
            TokenKind::Keyword => {
                counts.keywords += 1;
                self.line.keyword_chars += to - from;
                if self.profile.branch_keywords.contains(&text) {
                    counts.branches += 1;
                }
                if self.profile.loop_keywords.contains(&text) {
                    counts.loops += 1;
                }
            }
            TokenKind::Identifier => counts.identifiers += 1,
            TokenKind::Number => {
                counts.numbers += 1;
                counts.periods += text.matches('.').count();
            }
            TokenKind::String => self.line.string_chars += to - from,
            TokenKind::Operator => {
                match text.as_str() {
                    "(" | ")" => counts.parentheses += 1,
                    "[" | "]" => counts.brackets += 1,
                    "," => counts.commas += 1,
                    _ => {}
                }
                counts.periods += text.matches('.').count();
                if matches!(text.as_str(), "(" | "[" | "{") {
                    self.line.bracket_columns.push(from);
                }
                if is_assignment(&text) {
                    counts.assignments += 1;
                    self.line.assignment_columns.push(from);
                } else if is_arithmetic(&text) {
                    counts.arithmetic += 1;
                } else if is_comparison(&text) {
                    counts.comparisons += 1;
                }
            }
        }
        self.line.tokens.push(Token { kind, text, col: from });
    }

    /// Continue a string or docstring from the previous line.
    fn continue_string(&mut self, delim: &str, comment: bool) -> (usize, State) {
        match find_string_end(&self.chars, 0, delim) {
            Some(end) => {
                let n = delim.chars().count();
                if comment {
                    self.add_comment(0, end, 0, end - n);
                } else {
                    self.line.string_chars += end;
                }
                (end, State::Code)
            }
            None => {
                let len = self.chars.len();
                if comment {
                    self.add_comment(0, len, 0, len);
                } else {
                    self.line.string_chars += len;
                }
                (
                    len,
                    State::String {
                        delim: delim.to_string(),
                        comment,
                    },
                )
            }
        }
    }

    /// Scan a string literal whose opening delimiter (after any prefix) is at `open`.
    fn scan_string(&mut self, start: usize, open: usize, delim: &str, first_on_line: bool) -> (usize, State) {
        let n = delim.chars().count();
        let docstring = first_on_line && start == open && self.profile.docstring_delims.iter().any(|d| d == delim);
        let multiline = self.profile.multiline_strings.iter().any(|d| d == delim);
        let len = self.chars.len();
        match find_string_end(&self.chars, open + n, delim) {
            Some(end) => {
                if docstring {
                    self.add_comment(start, end, open + n, end - n);
                } else {
                    self.push(TokenKind::String, start, end);
                }
                (end, State::Code)
            }
            None => {
                if docstring {
                    self.add_comment(start, len, open + n, len);
                } else {
                    self.push(TokenKind::String, start, len);
                }
                let state = if multiline {
                    State::String {
                        delim: delim.to_string(),
                        comment: docstring,
                    }
                } else {
                    State::Code
                };
                (len, state)
            }
        }
    }

    fn string_delim_at(&self, i: usize) -> Option<String> {
        self.profile
            .string_delims
            .iter()
            .find(|d| starts_with_at(&self.chars, i, d))
            .cloned()
    }

    fn scan(mut self, state: State) -> (LineProfile, String, State) {
        let mut state = state;
        let mut i = 0;
        match state.clone() {
            State::Code => {}
            State::BlockComment { close } => {
                match find_plain(&self.chars, 0, &close) {
                    Some(pos) => {
                        let end = pos + close.chars().count();
                        self.add_comment(0, end, 0, pos);
                        i = end;
                    }
                    None => {
                        let len = self.chars.len();
                        self.add_comment(0, len, 0, len);
                        return (self.line, self.comment_text, state);
                    }
                }
            }
            State::String { delim, comment } => {
                let (next, s) = self.continue_string(&delim, comment);
                i = next;
                state = s;
                if !matches!(state, State::Code) {
                    return (self.line, self.comment_text, state);
                }
            }
        }

        let len = self.chars.len();
        while i < len {
            let c = self.chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let first_on_line = self.chars[..i].iter().all(|c| c.is_whitespace());

            if let Some((open, close)) = self
                .profile
                .block_comments
                .iter()
                .find(|(o, _)| starts_with_at(&self.chars, i, o))
                .cloned()
            {
                let body = i + open.chars().count();
                match find_plain(&self.chars, body, &close) {
                    Some(pos) => {
                        let end = pos + close.chars().count();
                        self.add_comment(i, end, body, pos);
                        i = end;
                        continue;
                    }
                    None => {
                        self.add_comment(i, len, body, len);
                        return (self.line, self.comment_text, State::BlockComment { close });
                    }
                }
            }
            if let Some(marker) = self
                .profile
                .line_comments
                .iter()
                .find(|m| starts_with_at(&self.chars, i, m))
                .cloned()
            {
                self.add_comment(i, len, i + marker.chars().count(), len);
                break;
            }
            if let Some(delim) = self.string_delim_at(i) {
                let (next, s) = self.scan_string(i, i, &delim, first_on_line);
                i = next;
                if !matches!(s, State::Code) {
                    return (self.line, self.comment_text, s);
                }
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let mut j = i + 1;
                while j < len && (self.chars[j].is_alphanumeric() || self.chars[j] == '_') {
                    j += 1;
                }
                let word = self.text(i, j);
                if self.profile.string_prefixes.iter().any(|p| p.eq_ignore_ascii_case(&word)) {
                    if let Some(delim) = self.string_delim_at(j) {
                        let (next, s) = self.scan_string(i, j, &delim, first_on_line);
                        i = next;
                        if !matches!(s, State::Code) {
                            return (self.line, self.comment_text, s);
                        }
                        continue;
                    }
                }
                let kind = if self.profile.is_keyword(&word) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                };
                self.push(kind, i, j);
                i = j;
                continue;
            }
            if c.is_ascii_digit() || (c == '.' && self.chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let hex = c == '0' && matches!(self.chars.get(i + 1), Some('x') | Some('X'));
                let mut j = i + 1;
                while j < len {
                    let d = self.chars[j];
                    let exponent_sign = (d == '+' || d == '-')
                        && !hex
                        && matches!(self.chars[j - 1], 'e' | 'E');
                    if d.is_alphanumeric() || d == '_' || d == '.' || exponent_sign {
                        j += 1;
                    } else {
                        break;
                    }
                }
                self.push(TokenKind::Number, i, j);
                i = j;
                continue;
            }
            let op_len = MULTI_CHAR_OPS
                .iter()
                .find(|op| starts_with_at(&self.chars, i, op))
                .map_or(1, |op| op.chars().count());
            self.push(TokenKind::Operator, i, i + op_len);
            i += op_len;
        }
        (self.line, self.comment_text, State::Code)
    }
}

/// Extract the full lexical profile of a snippet.
pub fn tokenize(snippet: &Snippet, profile: &LanguageProfile) -> LexicalProfile {
    let mut state = State::Code;
    let mut lines = Vec::with_capacity(snippet.lines.len());
    let mut comments = Vec::new();
    for (idx, text) in snippet.lines.iter().enumerate() {
        let (line, comment, next) = LineScanner::new(profile, text).scan(state);
        state = next;
        if line.has_comment {
            comments.push(CommentSegment {
                line: idx + 1,
                text: comment,
            });
        }
        lines.push(line);
    }

    let m = lines.len();
    let m_blank = lines.iter().filter(|l| l.blank).count();
    let m_code = lines.iter().filter(|l| l.is_code()).count();
    let m_val = lines.iter().filter(|l| l.is_valid()).count();
    let m_comment = lines.iter().filter(|l| l.has_comment).count();

    let identifiers: Vec<String> = lines
        .iter()
        .flat_map(|l| l.identifiers().map(str::to_string))
        .collect();
    let user_identifiers = identifiers
        .iter()
        .filter(|i| !profile.is_builtin(i))
        .cloned()
        .collect();
    let identifier_terms = identifiers
        .iter()
        .flat_map(|i| split_identifier(i))
        .filter(|t| !is_number(t))
        .collect();
    let comment_terms = comments.iter().flat_map(|c| text_terms(&c.text)).collect();

    let mut operators: BTreeMap<&str, usize> = BTreeMap::new();
    let mut operands: BTreeMap<&str, usize> = BTreeMap::new();
    for token in lines.iter().flat_map(|l| &l.tokens) {
        let bucket = match token.kind {
            TokenKind::Keyword | TokenKind::Operator => &mut operators,
            TokenKind::Identifier | TokenKind::Number | TokenKind::String => &mut operands,
        };
        *bucket.entry(token.text.as_str()).or_default() += 1;
    }
    let halstead = HalsteadCounts {
        distinct_operators: operators.len(),
        distinct_operands: operands.len(),
        total_operators: operators.values().sum(),
        total_operands: operands.values().sum(),
    };

    let mut char_counts = BTreeMap::new();
    for c in lines.iter().flat_map(|l| l.text.chars()) {
        *char_counts.entry(c).or_insert(0) += 1;
    }

    LexicalProfile {
        snippet_id: snippet.id.clone(),
        m,
        m_blank,
        m_ne: m - m_blank,
        m_code,
        m_val,
        m_comment,
        comments,
        identifiers,
        user_identifiers,
        comment_terms,
        identifier_terms,
        halstead,
        total_chars: lines.iter().map(|l| l.length).sum(),
        keyword_chars: lines.iter().map(|l| l.keyword_chars).sum(),
        string_chars: lines.iter().map(|l| l.string_chars).sum(),
        comment_chars: lines.iter().map(|l| l.comment_chars).sum(),
        char_counts,
        lines,
    }
}
