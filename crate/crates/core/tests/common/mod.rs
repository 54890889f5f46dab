//! Independent oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use gecx::edit::{align_words, AlignmentOp, EditSpan};
use gecx::metrics::{Counts, GoldAnnotation};
use gecx::nbest::{Hypothesis, NBestList, SentenceMetric};
use gecx::edit::FeatureVector;
use gecx::text::TokenSentence;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn sent(tokens: &[&str]) -> TokenSentence {
    TokenSentence::new(tokens.iter().copied())
}

/// Plain recursive edit distance. Matching first symbols is always optimal,
/// which keeps the recursion tractable for short inputs.
pub fn naive_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            if x == y {
                naive_distance(ra, rb)
            } else {
                1 + naive_distance(ra, rb)
                    .min(naive_distance(ra, b))
                    .min(naive_distance(a, rb))
            }
        }
    }
}

/// The same recursion with a memo table, for longer inputs.
pub fn memo_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    fn go<T: PartialEq>(a: &[T], b: &[T], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j + 1, memo)
                .min(go(a, b, i + 1, j, memo))
                .min(go(a, b, i, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

/// All sequences over `alphabet` of exactly `len` symbols.
pub fn all_strings(alphabet: &[char], len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                alphabet.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Non-match runs of an alignment: (src start, src end, hyp start, hyp end),
/// plus the number of matches between consecutive runs.
type Runs = (Vec<(usize, usize, usize, usize)>, Vec<usize>);

fn runs(ops: &[AlignmentOp]) -> Runs {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    let mut gaps = Vec::new();
    let mut open: Option<(usize, usize)> = None;
    let mut matches_since = 0;
    for op in ops {
        let is_match = matches!(op, AlignmentOp::Match { .. });
        if is_match {
            if let Some((si, sj)) = open.take() {
                out.push((si, i, sj, j));
                matches_since = 0;
            }
            matches_since += 1;
        } else if open.is_none() {
            if !out.is_empty() {
                gaps.push(matches_since);
            }
            open = Some((i, j));
        }
        match op {
            AlignmentOp::Match { .. } | AlignmentOp::Substitute { .. } => {
                i += 1;
                j += 1;
            }
            AlignmentOp::Delete { .. } => i += 1,
            AlignmentOp::Insert { .. } => j += 1,
        }
    }
    if let Some((si, sj)) = open {
        out.push((si, i, sj, j));
    }
    (out, gaps)
}

/// Every system edit set obtainable by grouping consecutive non-match runs
/// whose separating match count is at most `max_unchanged`.
pub fn all_groupings(src: &TokenSentence, hyp: &TokenSentence, max_unchanged: usize) -> Vec<Vec<EditSpan>> {
    let ops = align_words(src.tokens(), hyp.tokens());
    let (runs, gaps) = runs(&ops);
    let m = runs.len();
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << (m - 1)) {
        let joins_ok = (0..m - 1).all(|k| mask & (1 << k) == 0 || gaps[k] <= max_unchanged);
        if !joins_ok {
            continue;
        }
        let mut edits = Vec::new();
        let mut first = 0;
        for k in 0..m {
            let joined_next = k + 1 < m && mask & (1 << k) != 0;
            if !joined_next {
                let (s0, _, h0, _) = runs[first];
                let (_, s1, _, h1) = runs[k];
                edits.push(EditSpan::new(s0, s1, &hyp.tokens()[h0..h1]));
                first = k + 1;
            }
        }
        out.push(edits);
    }
    out
}

fn f_of(c: Counts, beta: f64) -> f64 {
    let p = if c.tp + c.fp == 0 { 1.0 } else { c.tp as f64 / (c.tp + c.fp) as f64 };
    let r = if c.tp + c.fn_ == 0 { 1.0 } else { c.tp as f64 / (c.tp + c.fn_) as f64 };
    if p + r == 0.0 {
        0.0
    } else {
        (1.0 + beta * beta) * p * r / (beta * beta * p + r)
    }
}

/// Exhaustive M²: per sentence, every annotator and every grouping is tried,
/// and the one maximizing running corpus F is kept (then more tp, fewer fp,
/// fewer fn, lower annotator).
pub fn brute_force_m2(gold: &[GoldAnnotation], hyps: &[TokenSentence], max_unchanged: usize, beta: f64) -> Counts {
    let mut running = Counts::default();
    for (g, hyp) in gold.iter().zip(hyps) {
        let groupings = all_groupings(&g.source, hyp, max_unchanged);
        let mut best: Option<(Counts, usize)> = None;
        for (a, set) in g.edit_sets.iter().enumerate() {
            for sys in &groupings {
                let tp = sys
                    .iter()
                    .filter(|e| {
                        set.iter()
                            .any(|x| x.start == e.start && x.end == e.end && x.correction == e.correction)
                    })
                    .count();
                let local = Counts::new(tp, sys.len() - tp, set.len() - tp);
                let cand = running + local;
                let better = match best {
                    None => true,
                    Some((b, ba)) => {
                        let inc = running + b;
                        let (fc, fb) = (f_of(cand, beta), f_of(inc, beta));
                        if fc != fb {
                            fc > fb
                        } else {
                            (std::cmp::Reverse(cand.tp), cand.fp, cand.fn_, a)
                                < (std::cmp::Reverse(inc.tp), inc.fp, inc.fn_, ba)
                        }
                    }
                };
                if better {
                    best = Some((local, a));
                }
            }
        }
        running += best.expect("at least one annotator").0;
    }
    running
}

const VOCAB: &[&str] = &["a", "b", "c", "d"];

/// Randomly substitutes, deletes and inserts tokens, each at `rate / 3`.
pub fn perturb(rng: &mut impl Rng, src: &[String], rate: f64) -> Vec<String> {
    let third = rate / 3.0;
    let mut out = Vec::new();
    for t in src {
        if rng.random_bool(third) {
            out.push(VOCAB.choose(rng).unwrap().to_string());
        }
        let r: f64 = rng.random();
        if r < third {
            out.push(VOCAB.choose(rng).unwrap().to_string());
        } else if r >= 2.0 * third {
            out.push(t.clone());
        }
    }
    if rng.random_bool(third) {
        out.push(VOCAB.choose(rng).unwrap().to_string());
    }
    out
}

/// A random gold/hypothesis pair: source of at most 6 tokens, 1 or 2
/// annotators with at most 3 edits each.
pub fn random_m2_sentence(rng: &mut impl Rng) -> (GoldAnnotation, TokenSentence) {
    let len = rng.random_range(0..=6);
    let src: Vec<String> = (0..len).map(|_| VOCAB.choose(rng).unwrap().to_string()).collect();
    let hyp = perturb(rng, &src, 0.3);
    let n_annotators = rng.random_range(1..=2);
    let source = TokenSentence::new(src.iter());
    let sets = (0..n_annotators)
        .map(|_| {
            // Half the time annotate toward a variant of the hypothesis.
            let base = if rng.random_bool(0.5) { &hyp } else { &src };
            let target = TokenSentence::new(perturb(rng, base, 0.2));
            let mut edits = gecx::edit::base_edits(
                &align_words(source.tokens(), target.tokens()),
                target.tokens(),
            );
            edits.truncate(3);
            edits
        })
        .collect();
    (GoldAnnotation::new(source, sets).unwrap(), TokenSentence::new(hyp))
}

/// F-like toy metric over `[tp, fp, fn]` looked up from a table.
pub struct TableMetric {
    pub table: Vec<Vec<Vec<f64>>>,
}

impl SentenceMetric for TableMetric {
    fn num_stats(&self) -> usize {
        3
    }
    fn num_sentences(&self) -> usize {
        self.table.len()
    }
    fn sentence_stats(&self, id: usize, hyp: &TokenSentence) -> Vec<f64> {
        let k: usize = hyp.tokens()[0].trim_start_matches('h').parse().unwrap();
        self.table[id][k].clone()
    }
    fn score(&self, t: &[f64]) -> f64 {
        f_of(Counts::new(t[0] as usize, t[1] as usize, t[2] as usize), 0.5)
    }
}

/// Random lists with dense features `f0..` and random `[tp, fp, fn]` rows.
/// Hypothesis `k` of each list has the single token `h{k}`, so the table
/// metric can find its statistics.
pub fn random_nbest(rng: &mut impl Rng, sentences: usize, hyps: usize, features: usize) -> (Vec<NBestList>, TableMetric) {
    let mut lists = Vec::new();
    let mut table = Vec::new();
    for s in 0..sentences {
        let mut hs = Vec::new();
        let mut rows = Vec::new();
        let gold = rng.random_range(1..4usize);
        for k in 0..hyps {
            let fv = FeatureVector::with_dense(
                (0..features).map(|f| (format!("f{f}"), (rng.random::<f64>() * 4.0 - 2.0))),
            );
            hs.push(Hypothesis::new(TokenSentence::new([format!("h{k}")]), fv, 0.0));
            let tp = rng.random_range(0..=gold);
            let fp = rng.random_range(0..3usize);
            rows.push(vec![tp as f64, fp as f64, (gold - tp) as f64]);
        }
        lists.push(NBestList::new(s, hs).unwrap());
        table.push(rows);
    }
    (lists, TableMetric { table })
}

/// Word- and char-level distances against the recursive oracle for every
/// pair over `{a, b, c}` with combined length at most `max_total`.
pub fn check_levenshtein_exhaustive(max_total: usize) -> Result<usize, String> {
    let alphabet = ['a', 'b', 'c'];
    let by_len: Vec<Vec<Vec<char>>> = (0..=max_total).map(|n| all_strings(&alphabet, n)).collect();
    let mut checked = 0;
    for la in 0..=max_total {
        for lb in 0..=max_total - la {
            for a in &by_len[la] {
                for b in &by_len[lb] {
                    check_pair(a, b)?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn check_pair(a: &[char], b: &[char]) -> Result<(), String> {
    let expected = if a.len() + b.len() <= 12 { naive_distance(a, b) } else { memo_distance(a, b) };
    let (sa, sb): (String, String) = (a.iter().collect(), b.iter().collect());
    let wa: Vec<String> = a.iter().map(|c| c.to_string()).collect();
    let wb: Vec<String> = b.iter().map(|c| c.to_string()).collect();
    let chars = gecx::edit::align_chars(&sa, &sb).distance;
    let ops = align_words(&wa, &wb);
    let words = ops.iter().filter(|o| !o.is_match()).count();
    if chars != expected || words != expected || gecx::edit::distance(&wa, &wb) != expected {
        return Err(format!("{sa:?} vs {sb:?}: oracle {expected}, chars {chars}, words {words}"));
    }
    Ok(())
}

/// `n` random pairs with lengths 9 to 30 over `{a, b, c}` against the
/// memoized oracle.
pub fn check_levenshtein_random(n: usize, rng: &mut impl Rng) -> Result<usize, String> {
    let alphabet = ['a', 'b', 'c'];
    for _ in 0..n {
        let la = rng.random_range(9..=30);
        let lb = rng.random_range(9..=30);
        let a: Vec<char> = (0..la).map(|_| *alphabet.choose(rng).unwrap()).collect();
        let b: Vec<char> = (0..lb).map(|_| *alphabet.choose(rng).unwrap()).collect();
        let expected = memo_distance(&a, &b);
        let (sa, sb): (String, String) = (a.iter().collect(), b.iter().collect());
        let wa: Vec<String> = a.iter().map(|c| c.to_string()).collect();
        let wb: Vec<String> = b.iter().map(|c| c.to_string()).collect();
        let chars = gecx::edit::align_chars(&sa, &sb).distance;
        let words = align_words(&wa, &wb).iter().filter(|o| !o.is_match()).count();
        if chars != expected || words != expected {
            return Err(format!("{sa} vs {sb}: oracle {expected}, chars {chars}, words {words}"));
        }
    }
    Ok(n)
}

/// Random corpora of 1 to 4 sentences scored by the library and by the
/// exhaustive matcher; counts must agree exactly.
pub fn check_m2_oracle(n: usize, rng: &mut impl Rng) -> Result<usize, String> {
    for instance in 0..n {
        let size = rng.random_range(1..=4);
        let (gold, hyps): (Vec<_>, Vec<_>) = (0..size).map(|_| random_m2_sentence(rng)).unzip();
        let max_unchanged = rng.random_range(0..=2);
        let report = gecx::metrics::m2_evaluate(&gold, &hyps, max_unchanged, 0.5)
            .map_err(|e| e.to_string())?;
        let oracle = brute_force_m2(&gold, &hyps, max_unchanged, 0.5);
        if report.counts() != oracle {
            return Err(format!(
                "instance {instance} (max_unchanged {max_unchanged}): library {:?}, oracle {oracle:?}\n{}\nhyps: {:?}",
                report.counts(),
                gecx::metrics::write_m2(&gold),
                hyps.iter().map(|h| h.join()).collect::<Vec<_>>()
            ));
        }
    }
    Ok(n)
}

/// Metric of the model `w + γ·d` by direct rescoring.
pub fn score_at(lists: &[NBestList], metric: &TableMetric, w: &gecx::nbest::LinearModel, d: &gecx::nbest::LinearModel, gamma: f64) -> f64 {
    LineScan::new(lists, metric, w, d).score_at(gamma)
}

/// `(w·f, d·f)` of every hypothesis, so a scan only redoes the argmax.
pub struct LineScan<'a> {
    lines: Vec<Vec<(f64, f64)>>,
    rows: Vec<&'a [Vec<f64>]>,
    metric: &'a TableMetric,
}

impl<'a> LineScan<'a> {
    pub fn new(lists: &[NBestList], metric: &'a TableMetric, w: &gecx::nbest::LinearModel, d: &gecx::nbest::LinearModel) -> Self {
        LineScan {
            lines: lists
                .iter()
                .map(|l| l.hypotheses.iter().map(|h| (w.score(&h.features), d.score(&h.features))).collect())
                .collect(),
            rows: lists.iter().map(|l| metric.table[l.sentence_id].as_slice()).collect(),
            metric,
        }
    }

    pub fn score_at(&self, gamma: f64) -> f64 {
        let mut totals = [0.0; 3];
        for (lines, rows) in self.lines.iter().zip(&self.rows) {
            let mut best = 0;
            let mut best_s = f64::NEG_INFINITY;
            for (k, &(a, b)) in lines.iter().enumerate() {
                let s = a + gamma * b;
                if s > best_s {
                    best = k;
                    best_s = s;
                }
            }
            for (t, v) in totals.iter_mut().zip(&rows[best]) {
                *t += v;
            }
        }
        self.metric.score(&totals)
    }
}

/// Envelope line search against a dense grid scan of `γ ∈ [-5, 5]`.
///
/// For each instance and each of two directions (a coordinate axis and a
/// random one) the profile must equal the scan at every grid point away
/// from a breakpoint, and the search optimum must equal the best grid value
/// unless the optimal interval is narrower than a grid cell.
pub fn check_mert_grid(
    instances: usize,
    sentences: usize,
    hyps: usize,
    features: usize,
    grid_points: usize,
    rng: &mut impl Rng,
) -> Result<usize, String> {
    use gecx::nbest::{line_profile, line_search, LinearModel};
    let cell = 10.0 / (grid_points - 1) as f64;
    let mut checked = 0;
    for inst in 0..instances {
        let (lists, metric) = random_nbest(rng, sentences, hyps, features);
        let w = LinearModel::from_weights((0..features).map(|f| (format!("f{f}"), rng.random::<f64>() * 2.0 - 1.0)));
        let axis = rng.random_range(0..features);
        let directions = [
            LinearModel::from_weights([(format!("f{axis}"), 1.0)]),
            LinearModel::from_weights((0..features).map(|f| (format!("f{f}"), rng.random::<f64>() * 2.0 - 1.0))),
        ];
        for d in &directions {
            let profile = line_profile(&lists, &metric, &w, d).map_err(|e| e.to_string())?;
            let opt = line_search(&lists, &metric, &w, d, Some((-5.0, 5.0))).map_err(|e| e.to_string())?;
            let scan = LineScan::new(&lists, &metric, &w, d);
            let mut grid_best = f64::NEG_INFINITY;
            let mut seg = 0;
            for k in 0..grid_points {
                let gamma = -5.0 + k as f64 * cell;
                let g = scan.score_at(gamma);
                grid_best = grid_best.max(g);
                while profile[seg].hi < gamma {
                    seg += 1;
                }
                let s = profile[seg];
                let near_break = (gamma - s.lo).abs() < 1e-9 || (s.hi - gamma).abs() < 1e-9;
                if !near_break && s.score != g {
                    return Err(format!("instance {inst}: γ={gamma}: profile {} vs scan {g}", s.score));
                }
            }
            if grid_best > opt.score + 1e-12 {
                return Err(format!("instance {inst}: scan {grid_best} beats search {}", opt.score));
            }
            if grid_best < opt.score && opt.hi - opt.lo >= cell {
                return Err(format!(
                    "instance {inst}: search {} on ({}, {}) missed by scan {grid_best}",
                    opt.score, opt.lo, opt.hi
                ));
            }
            let at_gamma = scan.score_at(opt.gamma);
            if at_gamma != opt.score {
                return Err(format!("instance {inst}: score at chosen γ {at_gamma} vs {}", opt.score));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Sentences of 3 to 12 tokens from a skewed distribution over `w0..w{vocab}`,
/// with a little local structure so higher orders matter.
pub fn random_lm_corpus(rng: &mut impl Rng, sentences: usize, vocab: usize) -> Vec<TokenSentence> {
    (0..sentences)
        .map(|_| {
            let len = rng.random_range(3..=12);
            let mut toks = Vec::with_capacity(len);
            let mut prev = rng.random_range(0..vocab);
            for _ in 0..len {
                let next = if rng.random_bool(0.4) {
                    (prev + 1) % vocab
                } else {
                    // Squaring a uniform draw favors low ids.
                    let u: f64 = rng.random();
                    ((u * u) * vocab as f64) as usize
                };
                toks.push(format!("w{next}"));
                prev = next;
            }
            TokenSentence::new(toks)
        })
        .collect()
}

/// Σ over the predictable vocabulary of P(w | context) for random contexts,
/// including contexts with unseen words and sentence starts. Returns the
/// largest deviation from 1.
pub fn max_normalization_error(model: &gecx::lm::NGramModel, contexts: usize, rng: &mut impl Rng) -> f64 {
    let vocab: Vec<String> = model.vocabulary().to_vec();
    let words: Vec<String> = model.predictable().map(str::to_owned).collect();
    let mut worst: f64 = 0.0;
    for c in 0..contexts {
        let len = rng.random_range(0..model.order().max(2));
        let ctx: Vec<String> = (0..len)
            .map(|_| match rng.random_range(0..10) {
                0 => "never-seen".to_owned(),
                1 => gecx::lm::BOS.to_owned(),
                _ => vocab.choose(rng).unwrap().clone(),
            })
            .collect();
        // Every fourth context is a run of sentence starts.
        let ctx = if c % 4 == 0 { vec![gecx::lm::BOS.to_owned(); len] } else { ctx };
        let total: f64 = words.iter().map(|w| model.prob(&ctx, w)).sum();
        worst = worst.max((total - 1.0).abs());
    }
    worst
}

/// Lists where hypothesis `best[s]` of sentence `s` fixes every gold edit
/// with no false positive, so it is the metric-best choice under any
/// background. Feature `signal` is the hypothesis' own sentence-level F0.5
/// in percent plus Gaussian noise of `sigma`; `noise0..noise{extra}` are
/// standard normal noise.
pub fn planted_instance(
    rng: &mut impl Rng,
    sentences: usize,
    hyps: usize,
    sigma: f64,
    extra: usize,
) -> (Vec<NBestList>, TableMetric, Vec<usize>) {
    use rand_distr::{Distribution, Normal};
    let noise = Normal::new(0.0, sigma).unwrap();
    let unit = Normal::new(0.0, 1.0).unwrap();
    let mut lists = Vec::new();
    let mut table = Vec::new();
    let mut best = Vec::new();
    for s in 0..sentences {
        let gold = rng.random_range(1..=3usize);
        let star = rng.random_range(0..hyps);
        let mut rows = Vec::new();
        let mut hs = Vec::new();
        for k in 0..hyps {
            let (tp, fp) = if k == star {
                (gold, 0)
            } else {
                loop {
                    let tp = rng.random_range(0..=gold);
                    let fp = rng.random_range(0..=2usize);
                    if tp < gold || fp > 0 {
                        break (tp, fp);
                    }
                }
            };
            let row = vec![tp as f64, fp as f64, (gold - tp) as f64];
            let own = 100.0 * f_of(Counts::new(tp, fp, gold - tp), 0.5);
            let mut fv = FeatureVector::with_dense([("signal".to_owned(), own + noise.sample(rng))]);
            for e in 0..extra {
                fv.dense.insert(format!("noise{e}"), unit.sample(rng));
            }
            hs.push(Hypothesis::new(TokenSentence::new([format!("h{k}")]), fv, 0.0));
            rows.push(row);
        }
        lists.push(NBestList::new(s, hs).unwrap());
        table.push(rows);
        best.push(star);
    }
    (lists, TableMetric { table }, best)
}

/// Fraction of lists where `model` picks `best`.
pub fn agreement(lists: &[NBestList], model: &gecx::nbest::LinearModel, best: &[usize]) -> f64 {
    let hits = lists
        .iter()
        .zip(best)
        .filter(|(l, &b)| gecx::nbest::linear_rescore(l, model).0 == b)
        .count();
    hits as f64 / lists.len() as f64
}

pub struct StageScores {
    pub spell: Counts,
    pub grammar: Counts,
    pub pipeline: Counts,
}

fn pr(c: Counts) -> (f64, f64) {
    (c.precision(), c.recall())
}

impl StageScores {
    /// Pipeline recall strictly above both single stages, and pipeline
    /// precision within two points of the better single stage.
    pub fn complementary(&self) -> bool {
        let (ps, rs) = pr(self.spell);
        let (pg, rg) = pr(self.grammar);
        let (pp, rp) = pr(self.pipeline);
        rp > rs.max(rg) && (pp - ps.max(pg)).abs() <= 0.02
    }

    pub fn summary(&self) -> String {
        let fmt = |c: Counts| {
            let (p, r) = pr(c);
            format!("P={:.2} R={:.2}", 100.0 * p, 100.0 * r)
        };
        format!(
            "spell {}, grammar {}, pipeline {}",
            fmt(self.spell),
            fmt(self.grammar),
            fmt(self.pipeline)
        )
    }
}

pub fn spell_checker(clean: &[TokenSentence]) -> gecx::pipeline::SpellChecker {
    gecx::pipeline::SpellChecker::from_corpus(clean, 400, 4, 3).unwrap()
}

/// Spell-fixer, grammar-fixer and their pipeline on the synthetic corpus.
pub fn complementarity(seed: u64) -> StageScores {
    use gecx::pipeline::{pipeline_run, RuleCorrector, Stage};
    use std::sync::Arc;
    let corpus = gecx::synthetic::complementary_corpus(2000, 300, seed).unwrap();
    let spell = Stage::Spell(Arc::new(spell_checker(&corpus.clean)));
    let rules = RuleCorrector::from_pairs(
        corpus.grammar_rules.iter().map(|(p, r)| (p.as_str(), r.as_str())),
    )
    .unwrap();
    let grammar = Stage::Correct(Arc::new(rules));
    let score = |stages: &[Stage]| {
        let out = pipeline_run(stages, &corpus.sources).unwrap();
        gecx::metrics::m2_evaluate(&corpus.gold, &out.output, 2, 0.5).unwrap().counts()
    };
    StageScores {
        spell: score(std::slice::from_ref(&spell)),
        grammar: score(std::slice::from_ref(&grammar)),
        pipeline: score(&[spell, grammar]),
    }
}

pub struct GatingResult {
    pub typos: usize,
    pub corrected: usize,
    /// Changes to tokens that are in the lexicon or a single subword.
    pub protected_changes: usize,
    pub protected_tokens: usize,
    pub length_changes: usize,
}

/// Spell-checker on a 500-token benchmark with 50 planted typos and 10
/// single-letter out-of-lexicon tokens.
pub fn spell_gating(seed: u64) -> GatingResult {
    let corpus = gecx::synthetic::complementary_corpus(2000, 0, seed).unwrap();
    let sc = spell_checker(&corpus.clean);
    let bench = gecx::synthetic::typo_benchmark(500, 50, 10, seed, &|t| sc.is_triggered(t));
    let mut r = GatingResult {
        typos: bench.typos.len(),
        corrected: 0,
        protected_changes: 0,
        protected_tokens: 0,
        length_changes: 0,
    };
    for (si, sentence) in bench.sentences.iter().enumerate() {
        let out = sc.correct(sentence);
        if out.len() != sentence.len() {
            r.length_changes += 1;
            continue;
        }
        for (ti, (before, after)) in sentence.iter().zip(out.iter()).enumerate() {
            if let Some((_, _, intended)) = bench.typos.iter().find(|(s, t, _)| (*s, *t) == (si, ti)) {
                r.corrected += usize::from(after == intended);
            } else if sc.lexicon.contains(before) || sc.bpe.fragment_count(before) == 1 {
                r.protected_tokens += 1;
                r.protected_changes += usize::from(before != after);
            }
        }
    }
    r
}
