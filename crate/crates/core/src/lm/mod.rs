//! Interpolated Kneser-Ney n-gram language models over words or word classes.
//!
//! A trained model is stored in backoff form: every listed n-gram carries its
//! fully interpolated probability and every context its backoff weight, which
//! is exactly what the ARPA format holds. Querying an unlisted n-gram backs
//! off to the shorter context, multiplying by the context's weight.

mod arpa;
mod model;

pub use model::{
    char_sentence, perplexity, project_to_classes, LanguageModel, NGramModel, SentenceScore,
    BOS, DEFAULT_CLASS_ORDER, DEFAULT_DISCOUNT, DEFAULT_WORD_ORDER, EOS, UNK,
};
