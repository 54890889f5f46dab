use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::TokenSentence;
use crate::error::{Error, Result};

/// Suffix carried by every subword unit except the last one of a word.
pub const CONTINUATION_MARKER: &str = "@@";
/// Internal end-of-word sentinel attached to the final symbol while learning.
pub const END_OF_WORD: &str = "</w>";

type Pair = (String, String);

/// An ordered list of merge operations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BpeModel {
    merges: Vec<Pair>,
    ranks: HashMap<Pair, usize>,
}

impl BpeModel {
    pub fn from_merges(merges: Vec<(String, String)>) -> Result<Self> {
        let mut ranks = HashMap::with_capacity(merges.len());
        for (rank, pair) in merges.iter().enumerate() {
            if ranks.insert(pair.clone(), rank).is_some() {
                return Err(Error::parse(
                    rank + 1,
                    format!("duplicate merge `{} {}`", pair.0, pair.1),
                ));
            }
        }
        Ok(BpeModel { merges, ranks })
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    /// Learns up to `num_merges` merges from the token frequencies of `corpus`.
    ///
    /// Each word starts as its characters, the last one carrying
    /// [`END_OF_WORD`]. The most frequent adjacent pair is merged, ties going
    /// to the lexicographically smallest pair. Learning stops early once no
    /// pair occurs at least twice.
    pub fn learn<'a, I>(corpus: I, num_merges: usize) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TokenSentence>,
    {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        let mut any = false;
        for sentence in corpus {
            any = true;
            for token in sentence.iter() {
                *counts.entry(token).or_insert(0) += 1;
            }
        }
        if !any {
            return Err(Error::EmptyCorpus);
        }
        let mut vocab: Vec<(&str, u64)> = counts.into_iter().collect();
        vocab.sort_unstable();
        let mut words: Vec<(Vec<String>, u64)> = vocab
            .into_iter()
            .map(|(w, c)| (initial_symbols(w), c))
            .collect();

        let mut pair_counts: HashMap<Pair, u64> = HashMap::new();
        let mut occurs_in: HashMap<Pair, HashSet<usize>> = HashMap::new();
        for (idx, (symbols, count)) in words.iter().enumerate() {
            for pair in pairs(symbols) {
                *pair_counts.entry(pair.clone()).or_insert(0) += count;
                occurs_in.entry(pair).or_default().insert(idx);
            }
        }

        let mut merges = Vec::new();
        while merges.len() < num_merges {
            let best = pair_counts
                .iter()
                .filter(|(_, &c)| c > 0)
                .max_by(|(pa, ca), (pb, cb)| ca.cmp(cb).then_with(|| pb.cmp(pa)));
            let Some((pair, &freq)) = best else { break };
            if freq < 2 {
                break;
            }
            let pair = pair.clone();
            let mut affected: Vec<usize> = occurs_in
                .get(&pair)
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default();
            affected.sort_unstable();
            for idx in affected {
                let (symbols, count) = &mut words[idx];
                for old in pairs(symbols) {
                    if let Some(c) = pair_counts.get_mut(&old) {
                        *c -= *count;
                    }
                    if let Some(set) = occurs_in.get_mut(&old) {
                        set.remove(&idx);
                    }
                }
                *symbols = merge_pair(symbols, &pair.0, &pair.1);
                for new in pairs(symbols) {
                    *pair_counts.entry(new.clone()).or_insert(0) += *count;
                    occurs_in.entry(new).or_default().insert(idx);
                }
            }
            pair_counts.retain(|_, c| *c > 0);
            merges.push(pair);
        }
        BpeModel::from_merges(merges)
    }

    /// Segments one word into subword units, without continuation markers.
    /// The end-of-word sentinel is stripped from the final unit.
    pub fn segment(&self, word: &str) -> Vec<String> {
        let mut symbols = initial_symbols(word);
        loop {
            let best = symbols
                .windows(2)
                .enumerate()
                .filter_map(|(i, w)| {
                    self.ranks
                        .get(&(w[0].clone(), w[1].clone()))
                        .map(|&r| (r, i))
                })
                .min();
            let Some((rank, _)) = best else { break };
            let (a, b) = &self.merges[rank];
            symbols = merge_pair(&symbols, a, b);
        }
        if let Some(last) = symbols.last_mut() {
            last.truncate(last.len() - END_OF_WORD.len());
        }
        symbols
    }

    /// Segments every token, marking non-final units with `@@`.
    pub fn apply(&self, sentence: &TokenSentence) -> TokenSentence {
        let mut out = Vec::with_capacity(sentence.len());
        for token in sentence.iter() {
            let units = self.segment(token);
            let n = units.len();
            for (i, mut unit) in units.into_iter().enumerate() {
                if i + 1 < n {
                    unit.push_str(CONTINUATION_MARKER);
                }
                out.push(unit);
            }
        }
        sentence.map_tokens(out)
    }

    /// Number of units [`BpeModel::apply`] would produce for `token`.
    pub fn fragment_count(&self, token: &str) -> usize {
        self.segment(token).len()
    }

    /// One merge per line, the two symbols separated by a space.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, b) in &self.merges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut merges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(' ');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                    merges.push((a.to_owned(), b.to_owned()))
                }
                _ => return Err(Error::parse(i + 1, "expected two space-separated symbols")),
            }
        }
        BpeModel::from_merges(merges)
    }
}

/// Rejoins subword units produced by [`BpeModel::apply`].
pub fn bpe_unapply(sentence: &TokenSentence) -> TokenSentence {
    let mut out = Vec::new();
    let mut pending = String::new();
    for unit in sentence.iter() {
        match unit.strip_suffix(CONTINUATION_MARKER) {
            Some(prefix) => pending.push_str(prefix),
            None => {
                pending.push_str(unit);
                out.push(std::mem::take(&mut pending));
            }
        }
    }
    if !pending.is_empty() {
        out.push(pending);
    }
    sentence.map_tokens(out)
}

fn initial_symbols(word: &str) -> Vec<String> {
    let mut symbols: Vec<String> = word.chars().map(String::from).collect();
    match symbols.last_mut() {
        Some(last) => last.push_str(END_OF_WORD),
        None => symbols.push(END_OF_WORD.to_owned()),
    }
    symbols
}

fn pairs(symbols: &[String]) -> impl Iterator<Item = Pair> + '_ {
    symbols.windows(2).map(|w| (w[0].clone(), w[1].clone()))
}

fn merge_pair(symbols: &[String], a: &str, b: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == a && symbols[i + 1] == b {
            out.push(format!("{a}{b}"));
            i += 2;
        } else {
            out.push(symbols[i].clone());
            i += 1;
        }
    }
    out
}
