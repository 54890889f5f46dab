use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::text::{TokenSentence, WordClassMap};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

pub const DEFAULT_DISCOUNT: f64 = 0.75;
pub const DEFAULT_WORD_ORDER: usize = 5;
pub const DEFAULT_CLASS_ORDER: usize = 9;

pub(crate) const UNK_ID: u32 = 0;
pub(crate) const BOS_ID: u32 = 1;
pub(crate) const EOS_ID: u32 = 2;

/// Log probability of a sentence including the end-of-sentence event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentenceScore {
    /// Natural-log probability.
    pub logprob: f64,
    /// Number of predicted positions: tokens plus `</s>`.
    pub n_scored: usize,
    /// `logprob / n_scored`.
    pub normalized: f64,
}

impl SentenceScore {
    pub fn new(logprob: f64, n_scored: usize) -> Self {
        SentenceScore {
            logprob,
            n_scored,
            normalized: logprob / n_scored as f64,
        }
    }
}

/// Anything that can score a whole sentence.
pub trait LanguageModel: Send + Sync {
    fn score(&self, sentence: &TokenSentence) -> SentenceScore;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Entry {
    /// Natural log; `-inf` for entries listed only to carry a backoff weight.
    pub logprob: f64,
    /// Natural-log backoff weight; 0 when the n-gram never serves as a context.
    pub backoff: f64,
}

pub(crate) type Table = HashMap<Box<[u32]>, Entry>;

/// A smoothed n-gram model in backoff form.
#[derive(Debug, Clone)]
pub struct NGramModel {
    pub(crate) order: usize,
    pub(crate) discount: Option<f64>,
    pub(crate) vocab: Vec<String>,
    pub(crate) index: HashMap<String, u32>,
    /// `tables[k - 1]` holds the k-grams.
    pub(crate) tables: Vec<Table>,
}

impl NGramModel {
    /// Trains an interpolated Kneser-Ney model with one fixed discount.
    ///
    /// Sentences are padded with `order - 1` `<s>` tokens and one `</s>`.
    /// The highest order uses raw counts, lower orders continuation counts
    /// (the number of distinct left extensions). The unigram level
    /// interpolates with a uniform distribution over the predictable
    /// vocabulary, and `<unk>` receives one reserved unigram count.
    pub fn train<'a, I>(corpus: I, order: usize, discount: f64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TokenSentence>,
    {
        if order == 0 {
            return Err(Error::invalid("order must be at least 1"));
        }
        if !(discount > 0.0 && discount < 1.0) {
            return Err(Error::invalid(format!("discount {discount} outside (0, 1)")));
        }
        let sentences: Vec<&TokenSentence> = corpus.into_iter().collect();
        if sentences.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let mut words: Vec<&str> = sentences
            .iter()
            .flat_map(|s| s.iter())
            .filter(|w| ![UNK, BOS, EOS].contains(w))
            .collect();
        words.sort_unstable();
        words.dedup();
        let mut vocab: Vec<String> = vec![UNK.into(), BOS.into(), EOS.into()];
        vocab.extend(words.into_iter().map(str::to_owned));
        let index: HashMap<String, u32> = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();

        // counts[k - 1]: raw counts at the top order, continuation counts below.
        let mut counts: Vec<HashMap<Box<[u32]>, u64>> = vec![HashMap::new(); order];
        for sentence in &sentences {
            let mut padded = vec![BOS_ID; order - 1];
            padded.extend(sentence.iter().map(|w| match w {
                BOS => UNK_ID,
                _ => index[w],
            }));
            padded.push(EOS_ID);
            for end in order - 1..padded.len() {
                let gram: Box<[u32]> = padded[end + 1 - order..=end].into();
                *counts[order - 1].entry(gram).or_insert(0) += 1;
            }
        }
        for k in (1..order).rev() {
            let mut lower: HashMap<Box<[u32]>, u64> = HashMap::new();
            for gram in counts[k].keys() {
                *lower.entry(gram[1..].into()).or_insert(0) += 1;
            }
            counts[k - 1] = lower;
        }
        *counts[0].entry(Box::new([UNK_ID])).or_insert(0) += 1;

        let mut model = NGramModel {
            order,
            discount: Some(discount),
            vocab,
            index,
            tables: vec![Table::new(); order],
        };

        // Unigrams: absolute discounting interpolated with a uniform distribution.
        let predictable = model.vocab.len() - 1;
        let total: u64 = counts[0].values().sum();
        let types = counts[0].len() as f64;
        let uniform = discount * types / total as f64 / predictable as f64;
        for id in (0..model.vocab.len() as u32).filter(|&id| id != BOS_ID) {
            let c = counts[0].get(&[id][..]).copied().unwrap_or(0) as f64;
            let p = (c - discount).max(0.0) / total as f64 + uniform;
            model.tables[0].insert(Box::new([id]), Entry { logprob: p.ln(), backoff: 0.0 });
        }
        model.tables[0].insert(
            Box::new([BOS_ID]),
            Entry { logprob: f64::NEG_INFINITY, backoff: 0.0 },
        );

        for k in 2..=order {
            let mut context_totals: HashMap<&[u32], (u64, u64)> = HashMap::new();
            for (gram, &c) in &counts[k - 1] {
                let t = context_totals.entry(&gram[..k - 1]).or_insert((0, 0));
                t.0 += c;
                t.1 += 1;
            }
            let mut entries = Vec::with_capacity(counts[k - 1].len());
            for (gram, &c) in &counts[k - 1] {
                let (total, types) = context_totals[&gram[..k - 1]];
                let gamma = discount * types as f64 / total as f64;
                let lower = model.logprob_ids(&gram[1..k - 1], gram[k - 1]).exp();
                let p = (c as f64 - discount) / total as f64 + gamma * lower;
                entries.push((gram.clone(), p.ln()));
            }
            for (gram, lp) in entries {
                model.tables[k - 1].insert(gram, Entry { logprob: lp, backoff: 0.0 });
            }
            for (context, (total, types)) in context_totals {
                let gamma = discount * types as f64 / total as f64;
                model.tables[k - 2]
                    .entry(context.into())
                    .or_insert(Entry { logprob: f64::NEG_INFINITY, backoff: 0.0 })
                    .backoff = gamma.ln();
            }
        }
        Ok(model)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The discount used in training; `None` for models read from ARPA text.
    pub fn discount(&self) -> Option<f64> {
        self.discount
    }

    /// Every vocabulary entry, including `<unk>`, `<s>` and `</s>`.
    pub fn vocabulary(&self) -> &[String] {
        &self.vocab
    }

    /// Vocabulary entries that can be predicted (everything except `<s>`).
    pub fn predictable(&self) -> impl Iterator<Item = &str> {
        self.vocab
            .iter()
            .map(String::as_str)
            .filter(|w| *w != BOS)
    }

    fn id(&self, word: &str) -> u32 {
        self.index.get(word).copied().unwrap_or(UNK_ID)
    }

    fn predicted_id(&self, word: &str) -> u32 {
        match self.id(word) {
            BOS_ID => UNK_ID,
            id => id,
        }
    }

    pub(crate) fn logprob_ids(&self, context: &[u32], word: u32) -> f64 {
        let context = &context[context.len().saturating_sub(self.order - 1)..];
        let mut backoff = 0.0;
        for start in 0..=context.len() {
            let ctx = &context[start..];
            let mut gram = Vec::with_capacity(ctx.len() + 1);
            gram.extend_from_slice(ctx);
            gram.push(word);
            if let Some(e) = self.tables[ctx.len()].get(&gram[..]) {
                if e.logprob.is_finite() {
                    return backoff + e.logprob;
                }
            }
            if let Some(e) = ctx
                .split_last()
                .and_then(|_| self.tables[ctx.len() - 1].get(ctx))
            {
                backoff += e.backoff;
            }
        }
        // Unreachable for models that list every predictable unigram.
        f64::NEG_INFINITY
    }

    /// Conditional natural-log probability of `word` after `context`.
    /// Out-of-vocabulary words map to `<unk>`.
    pub fn logprob<S: AsRef<str>>(&self, context: &[S], word: &str) -> f64 {
        let ctx: Vec<u32> = context.iter().map(|w| self.id(w.as_ref())).collect();
        self.logprob_ids(&ctx, self.predicted_id(word))
    }

    pub fn prob<S: AsRef<str>>(&self, context: &[S], word: &str) -> f64 {
        self.logprob(context, word).exp()
    }

    fn padded_ids(&self, sentence: &TokenSentence) -> Vec<u32> {
        let mut ids = vec![BOS_ID; self.order - 1];
        ids.extend(sentence.iter().map(|w| self.predicted_id(w)));
        ids.push(EOS_ID);
        ids
    }

    /// Sum of conditional log probabilities of every token and of `</s>`.
    pub fn score_sentence(&self, sentence: &TokenSentence) -> SentenceScore {
        let ids = self.padded_ids(sentence);
        let history = self.order - 1;
        let logprob = (history..ids.len())
            .map(|i| self.logprob_ids(&ids[i - history..i], ids[i]))
            .sum();
        SentenceScore::new(logprob, sentence.len() + 1)
    }
}

impl LanguageModel for NGramModel {
    fn score(&self, sentence: &TokenSentence) -> SentenceScore {
        self.score_sentence(sentence)
    }
}

/// `exp(-total logprob / total scored positions)` over a corpus.
pub fn perplexity<'a, M, I>(model: &M, corpus: I) -> Result<f64>
where
    M: LanguageModel + ?Sized,
    I: IntoIterator<Item = &'a TokenSentence>,
{
    let (mut logprob, mut n) = (0.0, 0usize);
    for s in corpus {
        let score = model.score(s);
        logprob += score.logprob;
        n += score.n_scored;
    }
    if n == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok((-logprob / n as f64).exp())
}

/// Replaces every token by its word class.
pub fn project_to_classes(sentence: &TokenSentence, classes: &WordClassMap) -> TokenSentence {
    sentence.map_tokens(sentence.iter().map(|w| classes.class_of(w).to_owned()).collect())
}

/// A word spelled out as a sentence of characters, for character-level models.
pub fn char_sentence(word: &str) -> TokenSentence {
    TokenSentence::new(word.chars().map(String::from))
}
