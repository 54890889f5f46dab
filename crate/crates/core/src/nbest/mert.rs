use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::metric::{add_into, stats_table, SentenceMetric, TuningMetric};
use super::{LinearModel, NBestList, TuneOutcome};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertConfig {
    /// Random directions tried per iteration, on top of every coordinate axis.
    pub random_directions: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Minimum metric gain for a move to be accepted.
    pub tolerance: f64,
}

impl Default for MertConfig {
    fn default() -> Self {
        MertConfig {
            random_directions: 8,
            seed: 42,
            max_iterations: 100,
            tolerance: 1e-6,
        }
    }
}

/// Upper envelope of the lines `intercept + γ·slope`.
///
/// Returns `(start, line)` pairs with strictly increasing starts; the first
/// start is `-inf`. Among identical lines the lowest index wins, matching the
/// tie-break of [`linear_rescore`](super::linear_rescore).
pub fn envelope(lines: &[(f64, f64)]) -> Vec<(f64, usize)> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (lines[i], lines[j]);
        a.1.total_cmp(&b.1)
            .then(b.0.total_cmp(&a.0))
            .then(i.cmp(&j))
    });
    order.dedup_by(|later, kept| lines[*later].1 == lines[*kept].1);

    let mut hull: Vec<(f64, usize)> = Vec::new();
    for idx in order {
        let (a, b) = lines[idx];
        let mut start = f64::NEG_INFINITY;
        while let Some(&(top_start, top)) = hull.last() {
            let (ta, tb) = lines[top];
            let x = (ta - a) / (b - tb);
            if x <= top_start {
                hull.pop();
            } else {
                start = x;
                break;
            }
        }
        hull.push((start, idx));
    }
    hull
}

/// Metric value on the open interval `(lo, hi)` of the step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub score: f64,
}

/// The best step found by [`line_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineOptimum {
    pub gamma: f64,
    pub score: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Piecewise-constant metric along a line, from per-list line sets.
fn profile(
    lines: &[Vec<(f64, f64)>],
    stats: &[Vec<Vec<f64>>],
    metric: &dyn SentenceMetric,
) -> Vec<Segment> {
    let envs: Vec<Vec<(f64, usize)>> = lines.par_iter().map(|l| envelope(l)).collect();
    let mut totals = vec![0.0; metric.num_stats()];
    let mut current: Vec<usize> = Vec::with_capacity(envs.len());
    let mut events: Vec<(f64, usize, usize)> = Vec::new();
    for (i, env) in envs.iter().enumerate() {
        current.push(env[0].1);
        add_into(&mut totals, &stats[i][env[0].1]);
        events.extend(env[1..].iter().map(|&(g, h)| (g, i, h)));
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut segments = Vec::new();
    let mut lo = f64::NEG_INFINITY;
    let mut k = 0;
    while k < events.len() {
        let g = events[k].0;
        segments.push(Segment {
            lo,
            hi: g,
            score: metric.score(&totals),
        });
        while k < events.len() && events[k].0 == g {
            let (_, i, h) = events[k];
            for (t, (old, new)) in totals
                .iter_mut()
                .zip(stats[i][current[i]].iter().zip(&stats[i][h]))
            {
                *t += new - old;
            }
            current[i] = h;
            k += 1;
        }
        lo = g;
    }
    segments.push(Segment {
        lo,
        hi: f64::INFINITY,
        score: metric.score(&totals),
    });
    segments
}

fn distance_to_zero(lo: f64, hi: f64) -> f64 {
    if lo <= 0.0 && 0.0 <= hi {
        0.0
    } else {
        lo.abs().min(hi.abs())
    }
}

/// Best segment within `range`; ties go to the segment nearest zero.
fn best_segment(segments: &[Segment], range: (f64, f64)) -> Option<LineOptimum> {
    let mut best: Option<LineOptimum> = None;
    for s in segments {
        let (lo, hi) = (s.lo.max(range.0), s.hi.min(range.1));
        if hi <= lo {
            continue;
        }
        let gamma = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (false, true) => hi - 1.0,
            (true, false) => lo + 1.0,
            (false, false) => 0.0,
        };
        let cand = LineOptimum {
            gamma,
            score: s.score,
            lo,
            hi,
        };
        let replace = match &best {
            None => true,
            Some(b) => {
                cand.score > b.score
                    || (cand.score == b.score
                        && distance_to_zero(lo, hi) < distance_to_zero(b.lo, b.hi))
            }
        };
        if replace {
            best = Some(cand);
        }
    }
    best
}

fn lines_for(nbests: &[NBestList], model: &LinearModel, direction: &LinearModel) -> Vec<Vec<(f64, f64)>> {
    nbests
        .iter()
        .map(|l| {
            l.hypotheses
                .iter()
                .map(|h| (model.score(&h.features), direction.score(&h.features)))
                .collect()
        })
        .collect()
}

/// Exact metric profile along `model + γ·direction` over all real `γ`.
pub fn line_profile(
    nbests: &[NBestList],
    metric: &dyn SentenceMetric,
    model: &LinearModel,
    direction: &LinearModel,
) -> Result<Vec<Segment>> {
    let stats = stats_table(nbests, metric)?;
    Ok(profile(&lines_for(nbests, model, direction), &stats, metric))
}

/// Optimal step along `model + γ·direction`, optionally restricted to a
/// closed range of `γ`. The returned step is the midpoint of the best
/// interval.
pub fn line_search(
    nbests: &[NBestList],
    metric: &dyn SentenceMetric,
    model: &LinearModel,
    direction: &LinearModel,
    range: Option<(f64, f64)>,
) -> Result<LineOptimum> {
    let range = range.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    if range.0.partial_cmp(&range.1) != Some(std::cmp::Ordering::Less) {
        return Err(Error::invalid("line search range must be non-empty"));
    }
    let segments = line_profile(nbests, metric, model, direction)?;
    Ok(best_segment(&segments, range).expect("a non-empty range meets some segment"))
}

struct Prepared {
    /// Dense values per list, per hypothesis, in `names` order.
    feats: Vec<Vec<Vec<f64>>>,
    /// Score contribution of features MERT does not tune.
    offsets: Vec<Vec<f64>>,
    stats: Vec<Vec<Vec<f64>>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Prepared {
    fn lines(&self, w: &[f64], d: &[f64]) -> Vec<Vec<(f64, f64)>> {
        self.feats
            .iter()
            .zip(&self.offsets)
            .map(|(hyps, offs)| {
                hyps.iter()
                    .zip(offs)
                    .map(|(f, o)| (dot(w, f) + o, dot(d, f)))
                    .collect()
            })
            .collect()
    }

    fn score(&self, w: &[f64], metric: &dyn SentenceMetric) -> f64 {
        let mut totals = vec![0.0; metric.num_stats()];
        for ((hyps, offs), stats) in self.feats.iter().zip(&self.offsets).zip(&self.stats) {
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for (k, (f, o)) in hyps.iter().zip(offs).enumerate() {
                let s = dot(w, f) + o;
                if s > best_score {
                    best = k;
                    best_score = s;
                }
            }
            add_into(&mut totals, &stats[best]);
        }
        metric.score(&totals)
    }
}

/// Coordinate-and-random-direction MERT over dense features.
///
/// Each iteration line-searches every coordinate axis and
/// `cfg.random_directions` seeded Gaussian directions, then takes the best
/// move if it gains more than `cfg.tolerance`. Sparse feature weights are
/// kept from `init`.
pub fn mert_tune(
    nbests: &[NBestList],
    metric: &TuningMetric<'_>,
    init: &LinearModel,
    cfg: &MertConfig,
) -> Result<TuneOutcome> {
    let metric = metric.decomposable()?;
    if nbests.is_empty() {
        return Err(Error::invalid("no n-best lists to tune on"));
    }
    let names: IndexSet<&str> = nbests
        .iter()
        .flat_map(|l| &l.hypotheses)
        .flat_map(|h| h.features.dense.keys().map(String::as_str))
        .collect();
    let stats = stats_table(nbests, metric)?;
    let prep = Prepared {
        feats: nbests
            .iter()
            .map(|l| {
                l.hypotheses
                    .iter()
                    .map(|h| names.iter().map(|n| h.features.dense.get(*n).copied().unwrap_or(0.0)).collect())
                    .collect()
            })
            .collect(),
        offsets: nbests
            .iter()
            .map(|l| {
                l.hypotheses
                    .iter()
                    .map(|h| {
                        h.features
                            .sparse
                            .iter()
                            .map(|(n, &c)| init.weight(n) * f64::from(c))
                            .sum()
                    })
                    .collect()
            })
            .collect(),
        stats,
    };

    let dim = names.len();
    let mut w: Vec<f64> = names.iter().map(|n| init.weight(n)).collect();
    let mut current = prep.score(&w, metric);
    let mut history = vec![current];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for _ in 0..cfg.max_iterations {
        if dim == 0 {
            break;
        }
        let mut directions: Vec<Vec<f64>> = (0..dim)
            .map(|k| (0..dim).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        for _ in 0..cfg.random_directions {
            let d: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dot(&d, &d).sqrt();
            if norm > 0.0 {
                directions.push(d.into_iter().map(|x| x / norm).collect());
            }
        }
        let optima: Vec<Option<LineOptimum>> = directions
            .par_iter()
            .map(|d| {
                let segs = profile(&prep.lines(&w, d), &prep.stats, metric);
                best_segment(&segs, (f64::NEG_INFINITY, f64::INFINITY))
            })
            .collect();
        let mut best: Option<(LineOptimum, usize)> = None;
        for (k, opt) in optima.into_iter().enumerate() {
            if let Some(o) = opt {
                if best.is_none_or(|(b, _)| o.score > b.score) {
                    best = Some((o, k));
                }
            }
        }
        let Some((opt, k)) = best else { break };
        if opt.score <= current + cfg.tolerance {
            break;
        }
        let moved: Vec<f64> = w
            .iter()
            .zip(&directions[k])
            .map(|(x, d)| x + opt.gamma * d)
            .collect();
        let score = prep.score(&moved, metric);
        if score <= current + cfg.tolerance {
            break;
        }
        w = moved;
        current = score;
        history.push(current);
    }

    let mut model = init.clone();
    for (name, value) in names.iter().zip(w) {
        model.set(*name, value);
    }
    Ok(TuneOutcome {
        model,
        score: current,
        history,
    })
}
