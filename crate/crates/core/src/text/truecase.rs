use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::TokenSentence;
use crate::error::{Error, Result};

/// Casing statistics keyed by lowercased surface form.
///
/// Only non-initial tokens are counted, so sentence-initial capitalization
/// never votes. The best casing of a form is the one with the highest count,
/// ties going to the lexicographically smallest surface string.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TruecaseModel {
    casings: HashMap<String, BTreeMap<String, u64>>,
}

impl TruecaseModel {
    pub fn train<'a, I>(corpus: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TokenSentence>,
    {
        let mut model = TruecaseModel::default();
        let mut seen = false;
        for sentence in corpus {
            seen = true;
            for token in sentence.iter().skip(1) {
                model.observe(token, 1);
            }
        }
        if !seen {
            return Err(Error::EmptyCorpus);
        }
        Ok(model)
    }

    fn observe(&mut self, surface: &str, count: u64) {
        *self
            .casings
            .entry(surface.to_lowercase())
            .or_default()
            .entry(surface.to_owned())
            .or_insert(0) += count;
    }

    pub fn best_casing(&self, lowercase: &str) -> Option<&str> {
        let counts = self.casings.get(lowercase)?;
        // BTreeMap iterates in ascending order; keep the first maximum.
        let mut best: Option<(&String, u64)> = None;
        for (surface, &count) in counts {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((surface, count));
            }
        }
        best.map(|(s, _)| s.as_str())
    }

    pub fn count(&self, surface: &str) -> u64 {
        self.casings
            .get(&surface.to_lowercase())
            .and_then(|m| m.get(surface))
            .copied()
            .unwrap_or(0)
    }

    /// Recases the first token; all other tokens are left untouched.
    pub fn apply(&self, sentence: &TokenSentence) -> TokenSentence {
        let mut tokens = sentence.tokens().to_vec();
        if let Some(first) = tokens.first_mut() {
            if let Some(best) = self.best_casing(&first.to_lowercase()) {
                *first = best.to_owned();
            }
        }
        sentence.map_tokens(tokens)
    }

    /// `surface<TAB>count` lines, sorted for stable output.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(&String, u64)> = self
            .casings
            .values()
            .flat_map(|m| m.iter().map(|(s, &c)| (s, c)))
            .collect();
        rows.sort();
        let mut out = String::new();
        for (surface, count) in rows {
            let _ = writeln!(out, "{surface}\t{count}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut model = TruecaseModel::default();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (surface, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "expected `surface<TAB>count`"))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad count `{count}`")))?;
            if surface.is_empty() || surface.contains(char::is_whitespace) || count == 0 {
                return Err(Error::parse(i + 1, "empty surface or zero count"));
            }
            model.observe(surface, count);
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(rows: &[&[&str]]) -> Vec<TokenSentence> {
        rows.iter().map(|r| TokenSentence::new(r.iter())).collect()
    }

    #[test]
    fn single_casing() {
        let m = TruecaseModel::train(&corpus(&[&["The", "cat"], &["a", "cat"]])).unwrap();
        assert_eq!(m.best_casing("cat"), Some("cat"));
        // Sentence-initial tokens do not vote.
        assert_eq!(m.best_casing("the"), None);
    }

    #[test]
    fn acronym_kept_upper() {
        let m = TruecaseModel::train(&corpus(&[&["x", "NASA"], &["y", "NASA"]])).unwrap();
        assert_eq!(m.best_casing("nasa"), Some("NASA"));
    }

    #[test]
    fn majority_wins() {
        let m = TruecaseModel::train(&corpus(&[&["x", "Bob"], &["y", "bob"], &["z", "Bob"]]))
            .unwrap();
        assert_eq!(m.best_casing("bob"), Some("Bob"));
    }

    #[test]
    fn tie_goes_to_smallest_surface() {
        let m = TruecaseModel::train(&corpus(&[&["x", "bob"], &["y", "Bob"]])).unwrap();
        // "Bob" < "bob" in byte order.
        assert_eq!(m.best_casing("bob"), Some("Bob"));
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(
            TruecaseModel::train(&Vec::new()),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn apply_lowercases_initial_function_word() {
        let m = TruecaseModel::train(&corpus(&[&["I", "saw", "the", "cat"]])).unwrap();
        let s = TokenSentence::new(["The", "cat"]);
        assert_eq!(m.apply(&s).tokens(), ["the", "cat"]);
        assert!(m.apply(&TokenSentence::default()).is_empty());
        let unk = TokenSentence::new(["Zyxq", "runs"]);
        assert_eq!(m.apply(&unk), unk);
    }

    #[test]
    fn file_round_trip() {
        let m = TruecaseModel::train(&corpus(&[&["x", "Bob", "NASA"], &["y", "bob"]])).unwrap();
        let back = TruecaseModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        assert!(TruecaseModel::from_text("Bob 3\n").is_err());
    }
}
