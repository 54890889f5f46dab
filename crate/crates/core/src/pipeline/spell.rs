use std::sync::Arc;

use super::Lexicon;
use crate::error::Result;
use crate::lm::{char_sentence, LanguageModel, NGramModel, DEFAULT_DISCOUNT};
use crate::text::{BpeModel, TokenSentence};

/// Default acceptance margin, in nats.
pub const DEFAULT_TAU: f64 = 1.0;
pub const DEFAULT_MAX_CANDIDATES: usize = 50;

/// Optimal string alignment distance over characters: Levenshtein plus
/// adjacent transpositions, no substring edited twice.
pub fn osa_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut v = (d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1)
                .min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                v = v.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = v;
        }
    }
    d[n][m]
}

/// Noisy-channel spelling corrector for out-of-lexicon words that the
/// subword model splits into several units.
///
/// A candidate `c` for token `t` scores
/// `-λ_char·cost(t, c) + λ_lm·log P_word(sentence with c) + ln freq(c)`,
/// where `cost` is the edit distance minus the character-LM gain
/// `normalized(c) - normalized(t)`. The original scores
/// `λ_lm·log P_word(sentence)`. A replacement must win by more than `tau`.
#[derive(Clone)]
pub struct SpellChecker {
    pub lexicon: Arc<Lexicon>,
    pub bpe: Arc<BpeModel>,
    pub char_lm: Arc<dyn LanguageModel>,
    pub word_lm: Arc<dyn LanguageModel>,
    pub lambda_char: f64,
    pub lambda_lm: f64,
    pub tau: f64,
    pub max_distance: usize,
    pub max_candidates: usize,
}

impl SpellChecker {
    pub fn new(
        lexicon: Arc<Lexicon>,
        bpe: Arc<BpeModel>,
        char_lm: Arc<dyn LanguageModel>,
        word_lm: Arc<dyn LanguageModel>,
    ) -> Self {
        SpellChecker {
            lexicon,
            bpe,
            char_lm,
            word_lm,
            lambda_char: 1.0,
            lambda_lm: 1.0,
            tau: DEFAULT_TAU,
            max_distance: 2,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }

    /// Trains every component on clean text: the lexicon and a word LM of
    /// `word_order`, a character LM of `char_order` over token occurrences,
    /// and `bpe_merges` subword merges.
    pub fn from_corpus(
        corpus: &[TokenSentence],
        bpe_merges: usize,
        char_order: usize,
        word_order: usize,
    ) -> Result<Self> {
        let lexicon = Lexicon::from_corpus(corpus)?;
        let chars: Vec<TokenSentence> = corpus
            .iter()
            .flat_map(|s| s.iter().map(char_sentence))
            .collect();
        let char_lm = NGramModel::train(&chars, char_order, DEFAULT_DISCOUNT)?;
        let word_lm = NGramModel::train(corpus, word_order, DEFAULT_DISCOUNT)?;
        let bpe = BpeModel::learn(corpus, bpe_merges)?;
        Ok(SpellChecker::new(
            Arc::new(lexicon),
            Arc::new(bpe),
            Arc::new(char_lm),
            Arc::new(word_lm),
        ))
    }

    /// Whether `token` is a correction target at all.
    pub fn is_triggered(&self, token: &str) -> bool {
        !self.lexicon.contains(token) && self.bpe.fragment_count(token) > 1
    }

    /// Lexicon words within the distance bound, most frequent first.
    pub fn candidates(&self, token: &str) -> Vec<&str> {
        let len = token.chars().count();
        self.lexicon
            .by_frequency()
            .filter(|(w, _)| w.chars().count().abs_diff(len) <= self.max_distance)
            .filter(|(w, _)| osa_distance(token, w) <= self.max_distance)
            .map(|(w, _)| w)
            .take(self.max_candidates)
            .collect()
    }

    pub fn channel_cost(&self, token: &str, candidate: &str) -> f64 {
        let gain = self.char_lm.score(&char_sentence(candidate)).normalized
            - self.char_lm.score(&char_sentence(token)).normalized;
        osa_distance(token, candidate) as f64 - gain
    }

    /// Corrects triggered tokens left to right; later decisions see earlier
    /// replacements. Sentence length never changes.
    pub fn correct(&self, sentence: &TokenSentence) -> TokenSentence {
        let mut tokens = sentence.tokens().to_vec();
        for i in 0..tokens.len() {
            if !self.is_triggered(&tokens[i]) {
                continue;
            }
            let original = tokens[i].clone();
            let lm = |toks: &[String]| {
                self.word_lm.score(&TokenSentence::new(toks.iter())).logprob
            };
            let keep = self.lambda_lm * lm(&tokens);
            let mut best: Option<(f64, &str)> = None;
            for cand in self.candidates(&original) {
                tokens[i] = cand.to_owned();
                let score = -self.lambda_char * self.channel_cost(&original, cand)
                    + self.lambda_lm * lm(&tokens)
                    + (self.lexicon.frequency(cand) as f64).ln();
                if best.is_none_or(|(b, _)| score > b) {
                    best = Some((score, cand));
                }
            }
            tokens[i] = match best {
                Some((score, cand)) if score > keep + self.tau => cand.to_owned(),
                _ => original,
            };
        }
        sentence.map_tokens(tokens)
    }
}
