use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{linear_rescore, LinearModel, NBestList};
use crate::error::{Error, Result};
use crate::metrics::{gleu_from_stats, gleu_sentence_stats, Counts, M2Scorer};
use crate::text::TokenSentence;

/// A corpus metric that is a function of summed per-sentence statistics.
pub trait SentenceMetric: Send + Sync {
    fn num_stats(&self) -> usize;
    /// Number of sentences the metric has gold data for.
    fn num_sentences(&self) -> usize;
    fn sentence_stats(&self, sentence_id: usize, hyp: &TokenSentence) -> Vec<f64>;
    fn score(&self, totals: &[f64]) -> f64;
}

/// Corpus metric callback: receives `(sentence_id, hypothesis)` pairs in list
/// order.
pub type CorpusFn<'a> = dyn Fn(&[(usize, &TokenSentence)]) -> f64 + Sync + 'a;

/// What a tuner optimizes.
pub enum TuningMetric<'a> {
    Decomposable(&'a dyn SentenceMetric),
    /// Only usable by tuners that do not need sentence statistics.
    Corpus(&'a CorpusFn<'a>),
}

impl<'a> TuningMetric<'a> {
    pub fn decomposable(&self) -> Result<&'a dyn SentenceMetric> {
        match self {
            TuningMetric::Decomposable(m) => Ok(*m),
            TuningMetric::Corpus(_) => Err(Error::NotDecomposable),
        }
    }

    /// Corpus score of hypothesis `selection[i]` from each list `i`.
    pub fn evaluate(&self, nbests: &[NBestList], selection: &[usize]) -> Result<f64> {
        match self {
            TuningMetric::Decomposable(m) => {
                check_ids(nbests, *m)?;
                let mut totals = vec![0.0; m.num_stats()];
                for (list, &k) in nbests.iter().zip(selection) {
                    let s = m.sentence_stats(list.sentence_id, &list.hypotheses[k].tokens);
                    add_into(&mut totals, &s);
                }
                Ok(m.score(&totals))
            }
            TuningMetric::Corpus(f) => {
                let chosen: Vec<_> = nbests
                    .iter()
                    .zip(selection)
                    .map(|(l, &k)| (l.sentence_id, &l.hypotheses[k].tokens))
                    .collect();
                Ok(f(&chosen))
            }
        }
    }
}

pub(crate) fn add_into(total: &mut [f64], stats: &[f64]) {
    for (t, s) in total.iter_mut().zip(stats) {
        *t += s;
    }
}

fn check_ids(nbests: &[NBestList], metric: &dyn SentenceMetric) -> Result<()> {
    match nbests.iter().find(|l| l.sentence_id >= metric.num_sentences()) {
        Some(l) => Err(Error::MissingSentence(l.sentence_id)),
        None => Ok(()),
    }
}

/// Statistics for every hypothesis of every list.
pub(crate) fn stats_table(
    nbests: &[NBestList],
    metric: &dyn SentenceMetric,
) -> Result<Vec<Vec<Vec<f64>>>> {
    check_ids(nbests, metric)?;
    Ok(nbests
        .par_iter()
        .map(|l| {
            l.hypotheses
                .iter()
                .map(|h| metric.sentence_stats(l.sentence_id, &h.tokens))
                .collect()
        })
        .collect())
}

/// Corpus metric of the hypotheses a model selects.
pub fn evaluate_model(
    nbests: &[NBestList],
    metric: &TuningMetric<'_>,
    model: &LinearModel,
) -> Result<f64> {
    let selection: Vec<usize> = nbests.iter().map(|l| linear_rescore(l, model).0).collect();
    metric.evaluate(nbests, &selection)
}

/// M² F-score with statistics `[tp, fp, fn]`.
///
/// Each sentence picks its best annotator on its own, so corpus scores can
/// differ slightly from the greedy corpus evaluation.
#[derive(Debug, Clone)]
pub struct M2Metric {
    pub scorer: M2Scorer,
}

impl M2Metric {
    pub fn new(scorer: M2Scorer) -> Self {
        M2Metric { scorer }
    }
}

impl SentenceMetric for M2Metric {
    fn num_stats(&self) -> usize {
        3
    }

    fn num_sentences(&self) -> usize {
        self.scorer.gold.len()
    }

    fn sentence_stats(&self, sentence_id: usize, hyp: &TokenSentence) -> Vec<f64> {
        let c = self
            .scorer
            .sentence_counts(sentence_id, hyp, Counts::default())
            .counts;
        vec![c.tp as f64, c.fp as f64, c.fn_ as f64]
    }

    fn score(&self, t: &[f64]) -> f64 {
        Counts::new(t[0] as usize, t[1] as usize, t[2] as usize).f_score(self.scorer.beta)
    }
}

/// GLEU against one reference per sentence.
///
/// With several references, one is drawn per sentence from a generator
/// seeded with `seed`.
#[derive(Debug, Clone)]
pub struct GleuMetric {
    sources: Vec<TokenSentence>,
    references: Vec<TokenSentence>,
    max_n: usize,
}

impl GleuMetric {
    pub fn new(
        sources: Vec<TokenSentence>,
        references: &[Vec<TokenSentence>],
        max_n: usize,
        seed: u64,
    ) -> Result<Self> {
        if sources.len() != references.len() {
            return Err(Error::LengthMismatch {
                what: "sources vs references",
                left: sources.len(),
                right: references.len(),
            });
        }
        if max_n == 0 {
            return Err(Error::invalid("max_n must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let references = references
            .iter()
            .enumerate()
            .map(|(i, refs)| match refs.len() {
                0 => Err(Error::invalid(format!("sentence {i} has no reference"))),
                1 => Ok(refs[0].clone()),
                n => Ok(refs[rng.random_range(0..n)].clone()),
            })
            .collect::<Result<_>>()?;
        Ok(GleuMetric {
            sources,
            references,
            max_n,
        })
    }
}

impl SentenceMetric for GleuMetric {
    fn num_stats(&self) -> usize {
        2 + 2 * self.max_n
    }

    fn num_sentences(&self) -> usize {
        self.sources.len()
    }

    fn sentence_stats(&self, id: usize, hyp: &TokenSentence) -> Vec<f64> {
        gleu_sentence_stats(&self.sources[id], &self.references[id], hyp, self.max_n)
    }

    fn score(&self, totals: &[f64]) -> f64 {
        gleu_from_stats(totals)
    }
}
