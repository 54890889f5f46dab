use indexmap::IndexSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metric::{add_into, stats_table, TuningMetric};
use super::{LinearModel, NBestList, TuneOutcome};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiraConfig {
    /// Step-size cap.
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for MiraConfig {
    fn default() -> Self {
        MiraConfig {
            c: 0.01,
            epochs: 10,
            seed: 42,
        }
    }
}

type Sparse = Vec<(usize, f64)>;

fn dot(w: &[f64], f: &Sparse) -> f64 {
    f.iter().map(|&(i, v)| w[i] * v).sum()
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (k, v) in values.enumerate() {
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    best
}

/// Batch hope-fear MIRA over all features, dense and sparse.
///
/// Sentences are visited in a seeded shuffled order each epoch. The gain of a
/// hypothesis is the corpus metric with the sentence's current pick replaced
/// by it, scaled by the number of sentences. The returned model is whichever
/// of `init` and the running averages after each epoch scores best on
/// `nbests` (earliest on ties).
pub fn mira_tune(
    nbests: &[NBestList],
    metric: &TuningMetric<'_>,
    init: &LinearModel,
    cfg: &MiraConfig,
) -> Result<TuneOutcome> {
    let metric = metric.decomposable()?;
    if cfg.c.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || cfg.epochs == 0 {
        return Err(Error::invalid("MIRA needs C > 0 and at least one epoch"));
    }
    if nbests.is_empty() {
        return Err(Error::invalid("no n-best lists to tune on"));
    }
    let stats = stats_table(nbests, metric)?;

    let mut names: IndexSet<String> = init.weights.keys().cloned().collect();
    let feats: Vec<Vec<Sparse>> = nbests
        .iter()
        .map(|l| {
            l.hypotheses
                .iter()
                .map(|h| {
                    h.features
                        .iter()
                        .map(|(n, v)| (names.insert_full(n.to_string()).0, v))
                        .collect()
                })
                .collect()
        })
        .collect();
    let dim = names.len();
    let w0: Vec<f64> = names.iter().map(|n| init.weight(n)).collect();

    let pick = |w: &[f64], i: usize| argmax(feats[i].iter().map(|f| dot(w, f)));
    let corpus_score = |w: &[f64]| {
        let mut totals = vec![0.0; metric.num_stats()];
        for (i, st) in stats.iter().enumerate() {
            add_into(&mut totals, &st[pick(w, i)]);
        }
        metric.score(&totals)
    };

    let n = nbests.len() as f64;
    let mut w = w0.clone();
    let mut selected: Vec<usize> = (0..nbests.len()).map(|i| pick(&w, i)).collect();
    let mut background = vec![0.0; metric.num_stats()];
    for (i, &k) in selected.iter().enumerate() {
        add_into(&mut background, &stats[i][k]);
    }

    let mut sum = vec![0.0; dim];
    let mut steps = 0usize;
    let mut best_w = w0.clone();
    let mut best_score = corpus_score(&w0);
    let initial_score = best_score;
    let mut history = vec![best_score];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..nbests.len()).collect();
    let mut delta = vec![0.0; dim];

    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let mut rest = background.clone();
            for (r, s) in rest.iter_mut().zip(&stats[i][selected[i]]) {
                *r -= s;
            }
            let gains: Vec<f64> = stats[i]
                .iter()
                .map(|s| {
                    let mut t = rest.clone();
                    add_into(&mut t, s);
                    n * metric.score(&t)
                })
                .collect();
            let scores: Vec<f64> = feats[i].iter().map(|f| dot(&w, f)).collect();
            let hope = argmax(scores.iter().zip(&gains).map(|(s, g)| s + g));
            let fear = argmax(scores.iter().zip(&gains).map(|(s, g)| s - g));
            let loss = (gains[hope] - gains[fear]) - (scores[hope] - scores[fear]);

            delta.iter_mut().for_each(|d| *d = 0.0);
            for &(j, v) in &feats[i][hope] {
                delta[j] += v;
            }
            for &(j, v) in &feats[i][fear] {
                delta[j] -= v;
            }
            let norm2: f64 = delta.iter().map(|d| d * d).sum();
            if loss > 0.0 && norm2 > 0.0 {
                let eta = cfg.c.min(loss / norm2);
                for (x, d) in w.iter_mut().zip(&delta) {
                    *x += eta * d;
                }
            }

            selected[i] = pick(&w, i);
            background = rest;
            add_into(&mut background, &stats[i][selected[i]]);
            for (s, x) in sum.iter_mut().zip(&w) {
                *s += x;
            }
            steps += 1;
        }
        let avg: Vec<f64> = sum.iter().map(|s| s / steps as f64).collect();
        let score = corpus_score(&avg);
        history.push(score);
        if score > best_score {
            best_score = score;
            best_w = avg;
        }
    }
    debug_assert!(best_score >= initial_score);

    let mut model = init.clone();
    if best_w != w0 {
        for (name, value) in names.iter().zip(best_w) {
            if value != 0.0 || model.weights.contains_key(name) {
                model.set(name.clone(), value);
            }
        }
    }
    Ok(TuneOutcome {
        model,
        score: best_score,
        history,
    })
}
