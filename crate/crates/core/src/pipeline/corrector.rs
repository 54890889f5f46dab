use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::nbest::{parse_nbest, NBestList};
use crate::text::TokenSentence;

/// Something that proposes corrections for a sentence.
pub trait Corrector: Send + Sync {
    /// Returns at least one hypothesis; the first is the corrector's choice.
    fn correct(&self, id: usize, sentence: &TokenSentence) -> Result<NBestList>;
}

/// Returns its input unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityCorrector;

impl Corrector for IdentityCorrector {
    fn correct(&self, id: usize, sentence: &TokenSentence) -> Result<NBestList> {
        Ok(NBestList::single(id, sentence.clone()))
    }
}

/// Replays stored n-best lists by sentence id, ignoring the input text.
#[derive(Debug, Clone, Default)]
pub struct FileCorrector {
    lists: BTreeMap<usize, NBestList>,
}

impl FileCorrector {
    pub fn new(lists: Vec<NBestList>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for list in lists {
            let id = list.sentence_id;
            if map.insert(id, list).is_some() {
                return Err(Error::invalid(format!("sentence id {id} listed twice")));
            }
        }
        Ok(FileCorrector { lists: map })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(parse_nbest(text)?)
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }
}

impl Corrector for FileCorrector {
    fn correct(&self, id: usize, _sentence: &TokenSentence) -> Result<NBestList> {
        self.lists.get(&id).cloned().ok_or(Error::MissingSentence(id))
    }
}

/// Token-sequence rewrite rules applied leftmost-longest without overlap.
#[derive(Debug, Clone, Default)]
pub struct RuleCorrector {
    rules: Vec<(Vec<String>, Vec<String>)>,
}

impl RuleCorrector {
    pub fn new(rules: Vec<(Vec<String>, Vec<String>)>) -> Result<Self> {
        if rules.iter().any(|(p, _)| p.is_empty()) {
            return Err(Error::invalid("rewrite rule with an empty pattern"));
        }
        Ok(RuleCorrector { rules })
    }

    /// Builds rules from `pattern → replacement` string pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let split = |s: &str| s.split_whitespace().map(str::to_owned).collect::<Vec<_>>();
        Self::new(pairs.into_iter().map(|(p, r)| (split(p), split(r))).collect())
    }

    pub fn rewrite(&self, sentence: &TokenSentence) -> TokenSentence {
        let toks = sentence.tokens();
        let mut out = Vec::with_capacity(toks.len());
        let mut i = 0;
        while i < toks.len() {
            // Longest pattern wins; the earlier rule wins among equal lengths.
            let mut best: Option<&(Vec<String>, Vec<String>)> = None;
            for rule in &self.rules {
                let p = &rule.0;
                if toks[i..].starts_with(p) && best.is_none_or(|b| p.len() > b.0.len()) {
                    best = Some(rule);
                }
            }
            match best {
                Some((pattern, replacement)) => {
                    out.extend(replacement.iter().cloned());
                    i += pattern.len();
                }
                None => {
                    out.push(toks[i].clone());
                    i += 1;
                }
            }
        }
        sentence.map_tokens(out)
    }
}

impl Corrector for RuleCorrector {
    fn correct(&self, id: usize, sentence: &TokenSentence) -> Result<NBestList> {
        Ok(NBestList::single(id, self.rewrite(sentence)))
    }
}

/// Reads `pattern<TAB>replacement` lines; blank lines and `#` comments are
/// skipped.
pub fn parse_rules(text: &str) -> Result<RuleCorrector> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (p, r) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(i + 1, "expected `pattern<TAB>replacement`"))?;
        if p.trim().is_empty() {
            return Err(Error::parse(i + 1, "empty pattern"));
        }
        pairs.push((p, r));
    }
    RuleCorrector::from_pairs(pairs)
}
