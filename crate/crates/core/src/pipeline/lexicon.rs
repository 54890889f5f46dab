use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::text::TokenSentence;

/// Known word forms with frequencies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    freq: HashMap<String, u64>,
}

impl Lexicon {
    /// Counts every token of a corpus.
    pub fn from_corpus<'a>(corpus: impl IntoIterator<Item = &'a TokenSentence>) -> Result<Self> {
        let mut freq = HashMap::new();
        for s in corpus {
            for t in s.iter() {
                *freq.entry(t.to_owned()).or_insert(0) += 1;
            }
        }
        if freq.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Lexicon { freq })
    }

    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut freq = HashMap::new();
        for (w, c) in counts {
            let w = w.into();
            if c == 0 {
                return Err(Error::invalid(format!("zero frequency for `{w}`")));
            }
            *freq.entry(w).or_insert(0) += c;
        }
        if freq.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Lexicon { freq })
    }

    /// Reads `word [count]` lines; a missing count means 1.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let count = match parts.next() {
                None => 1,
                Some(c) => c
                    .parse::<u64>()
                    .ok()
                    .filter(|&c| c >= 1)
                    .ok_or_else(|| Error::parse(i + 1, format!("bad frequency `{c}`")))?,
            };
            if parts.next().is_some() {
                return Err(Error::parse(i + 1, "expected `word [count]`"));
            }
            pairs.push((word, count));
        }
        Self::from_counts(pairs)
    }

    /// `word<TAB>count` lines, most frequent first.
    pub fn to_text(&self) -> String {
        self.by_frequency()
            .map(|(w, c)| format!("{w}\t{c}\n"))
            .collect()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.freq.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> u64 {
        self.freq.get(word).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    /// Descending frequency, then ascending word.
    pub fn by_frequency(&self) -> impl Iterator<Item = (&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.freq.iter().map(|(w, &c)| (w.as_str(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v.into_iter()
    }
}
