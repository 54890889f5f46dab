//! Sentence representation and deterministic preprocessing: tokenization,
//! truecasing, BPE subword segmentation and word-class maps.

mod bpe;
mod classes;
mod tokenize;
mod truecase;

use std::fmt;
use std::ops::Index;

pub use bpe::{bpe_unapply, BpeModel, CONTINUATION_MARKER, END_OF_WORD};
pub use classes::{WordClassMap, UNKNOWN_CLASS};
pub use tokenize::tokenize;
pub use truecase::TruecaseModel;

/// A tokenized sentence. Tokens are never empty and never contain whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenSentence {
    tokens: Vec<String>,
    /// 0-based corpus line index, when the sentence came from a corpus.
    pub id: Option<usize>,
}

impl TokenSentence {
    /// Builds a sentence from tokens, splitting any token that contains
    /// whitespace and dropping empty ones so the invariants always hold.
    pub fn new<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens = tokens
            .into_iter()
            .flat_map(|t| {
                t.as_ref()
                    .split_whitespace()
                    .map(str::to_owned)
                    .collect::<Vec<_>>()
            })
            .collect();
        TokenSentence { tokens, id: None }
    }

    /// Splits an already-tokenized line on whitespace.
    pub fn from_line(line: &str) -> Self {
        TokenSentence {
            tokens: line.split_whitespace().map(str::to_owned).collect(),
            id: None,
        }
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = Some(id);
        self
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// Joins tokens with single spaces.
    pub fn join(&self) -> String {
        self.tokens.join(" ")
    }

    /// Same tokens, same id, with the token list replaced.
    pub(crate) fn map_tokens(&self, tokens: Vec<String>) -> Self {
        TokenSentence {
            tokens,
            id: self.id,
        }
    }
}

impl fmt::Display for TokenSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join())
    }
}

impl Index<usize> for TokenSentence {
    type Output = str;

    fn index(&self, index: usize) -> &str {
        &self.tokens[index]
    }
}

impl<S: AsRef<str>> FromIterator<S> for TokenSentence {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        TokenSentence::new(iter)
    }
}

/// Reads a tokenized corpus, one sentence per line, assigning line ids.
pub fn read_corpus(text: &str) -> Vec<TokenSentence> {
    text.lines()
        .enumerate()
        .map(|(i, line)| TokenSentence::from_line(line).with_id(i))
        .collect()
}

/// Writes sentences one per line with a trailing newline after each.
pub fn write_corpus<'a>(sentences: impl IntoIterator<Item = &'a TokenSentence>) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&s.join());
        out.push('\n');
    }
    out
}
