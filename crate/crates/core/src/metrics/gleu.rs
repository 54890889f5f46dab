use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::text::TokenSentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GleuConfig {
    pub max_n: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for GleuConfig {
    fn default() -> Self {
        GleuConfig {
            max_n: 4,
            iterations: 500,
            seed: 42,
        }
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Sufficient statistics of one sentence:
/// `[hyp_len, ref_len, num_1, den_1, ..., num_N, den_N]`.
///
/// `num_n` is the clipped reference match count minus the penalty for
/// hypothesis n-grams that occur in the source but not in the reference
/// (each clipped by its source count), floored at zero. `den_n` is the number
/// of hypothesis n-grams.
pub fn gleu_sentence_stats(
    source: &TokenSentence,
    reference: &TokenSentence,
    hyp: &TokenSentence,
    max_n: usize,
) -> Vec<f64> {
    let mut stats = Vec::with_capacity(2 + 2 * max_n);
    stats.push(hyp.len() as f64);
    stats.push(reference.len() as f64);
    for n in 1..=max_n {
        let h = ngram_counts(hyp.tokens(), n);
        let r = ngram_counts(reference.tokens(), n);
        let s = ngram_counts(source.tokens(), n);
        let mut matches = 0usize;
        let mut penalty = 0usize;
        for (gram, &hc) in &h {
            match r.get(gram) {
                Some(&rc) => matches += hc.min(rc),
                None => penalty += hc.min(s.get(gram).copied().unwrap_or(0)),
            }
        }
        stats.push(matches.saturating_sub(penalty) as f64);
        stats.push((hyp.len() + 1).saturating_sub(n) as f64);
    }
    stats
}

/// Corpus GLEU from summed sentence statistics.
///
/// The precision term is the geometric mean over orders that have at least
/// one hypothesis n-gram; any such order with zero numerator gives 0, as does
/// a corpus with no hypothesis tokens.
pub fn gleu_from_stats(stats: &[f64]) -> f64 {
    let (hyp_len, ref_len) = (stats[0], stats[1]);
    if hyp_len == 0.0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    let mut orders = 0usize;
    for pair in stats[2..].chunks_exact(2) {
        let (num, den) = (pair[0], pair[1]);
        if den == 0.0 {
            continue;
        }
        if num == 0.0 {
            return 0.0;
        }
        log_sum += (num / den).ln();
        orders += 1;
    }
    if orders == 0 {
        return 0.0;
    }
    let brevity = (1.0 - ref_len / hyp_len).min(0.0);
    (brevity + log_sum / orders as f64).exp()
}

fn add_into(total: &mut [f64], stats: &[f64]) {
    for (t, s) in total.iter_mut().zip(stats) {
        *t += s;
    }
}

/// GLEU over a corpus with one or more references per sentence.
///
/// With a single reference everywhere the score is computed once. Otherwise
/// each iteration samples one reference per sentence uniformly (iteration
/// `i` uses stream `i` of a ChaCha generator seeded with `cfg.seed`) and the
/// mean of the per-iteration corpus scores is returned.
pub fn gleu_evaluate(
    sources: &[TokenSentence],
    references: &[Vec<TokenSentence>],
    hyps: &[TokenSentence],
    cfg: &GleuConfig,
) -> Result<f64> {
    if sources.len() != hyps.len() {
        return Err(Error::LengthMismatch {
            what: "sources vs hypotheses",
            left: sources.len(),
            right: hyps.len(),
        });
    }
    if references.len() != hyps.len() {
        return Err(Error::LengthMismatch {
            what: "references vs hypotheses",
            left: references.len(),
            right: hyps.len(),
        });
    }
    if cfg.max_n == 0 || cfg.iterations == 0 {
        return Err(Error::invalid("max_n and iterations must be at least 1"));
    }
    if let Some(i) = references.iter().position(Vec::is_empty) {
        return Err(Error::invalid(format!("sentence {i} has no reference")));
    }

    // Per sentence, per reference statistics.
    let table: Vec<Vec<Vec<f64>>> = sources
        .iter()
        .zip(references)
        .zip(hyps)
        .map(|((s, refs), h)| {
            refs.iter()
                .map(|r| gleu_sentence_stats(s, r, h, cfg.max_n))
                .collect()
        })
        .collect();
    let width = 2 + 2 * cfg.max_n;

    if references.iter().all(|r| r.len() == 1) {
        let mut total = vec![0.0; width];
        for per_ref in &table {
            add_into(&mut total, &per_ref[0]);
        }
        return Ok(gleu_from_stats(&total));
    }

    let mut sum = 0.0;
    for iteration in 0..cfg.iterations {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(iteration as u64);
        let mut total = vec![0.0; width];
        for per_ref in &table {
            let pick = rng.random_range(0..per_ref.len());
            add_into(&mut total, &per_ref[pick]);
        }
        sum += gleu_from_stats(&total);
    }
    Ok(sum / cfg.iterations as f64)
}
