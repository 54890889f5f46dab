use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::fscore::Counts;
use crate::edit::{align_words, extract_edits, EditSpan};
use crate::error::{Error, Result};
use crate::text::TokenSentence;

pub const DEFAULT_MAX_UNCHANGED: usize = 2;
pub const DEFAULT_BETA: f64 = 0.5;

/// A source sentence with one gold edit set per annotator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldAnnotation {
    pub source: TokenSentence,
    pub edit_sets: Vec<Vec<EditSpan>>,
}

impl GoldAnnotation {
    /// Sorts each edit set and rejects overlapping edits or spans outside
    /// the source. At least one (possibly empty) edit set is required.
    pub fn new(source: TokenSentence, mut edit_sets: Vec<Vec<EditSpan>>) -> Result<Self> {
        if edit_sets.is_empty() {
            edit_sets.push(Vec::new());
        }
        for set in &mut edit_sets {
            set.sort();
            set.dedup_by(|a, b| a.same_edit(b));
            for pair in set.windows(2) {
                if pair[1].start < pair[0].end {
                    return Err(Error::invalid(format!(
                        "overlapping gold edits {} and {}",
                        pair[0], pair[1]
                    )));
                }
            }
            if let Some(e) = set.iter().find(|e| e.end > source.len() || e.start > e.end) {
                return Err(Error::invalid(format!("gold edit {e} outside the source")));
            }
        }
        Ok(GoldAnnotation { source, edit_sets })
    }

    pub fn annotators(&self) -> usize {
        self.edit_sets.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceResult {
    pub counts: Counts,
    pub annotator: usize,
}

/// Corpus-level M² result.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub beta: f64,
    pub per_sentence: Vec<SentenceResult>,
}

impl EvalReport {
    pub fn from_counts(counts: Counts, beta: f64, per_sentence: Vec<SentenceResult>) -> Self {
        EvalReport {
            tp: counts.tp,
            fp: counts.fp,
            fn_: counts.fn_,
            precision: counts.precision(),
            recall: counts.recall(),
            f_score: counts.f_score(beta),
            beta,
            per_sentence,
        }
    }

    pub fn counts(&self) -> Counts {
        Counts::new(self.tp, self.fp, self.fn_)
    }

    /// Machine-readable `key<TAB>value` lines.
    pub fn to_key_values(&self) -> String {
        format!(
            "tp\t{}\nfp\t{}\nfn\t{}\nprecision\t{:.4}\nrecall\t{:.4}\nf_{}\t{:.4}\n",
            self.tp, self.fp, self.fn_, self.precision, self.recall, self.beta, self.f_score
        )
    }

    /// Human-readable summary in the usual scorer layout.
    pub fn to_human(&self) -> String {
        format!(
            "Precision   : {:.4}\nRecall      : {:.4}\nF_{:<10}: {:.4}\n",
            self.precision, self.recall, self.beta, self.f_score
        )
    }

    /// `sentence<TAB>tp<TAB>fp<TAB>fn<TAB>annotator` rows with a header.
    pub fn per_sentence_tsv(&self) -> String {
        let mut out = String::from("sentence\ttp\tfp\tfn\tannotator\n");
        for (i, r) in self.per_sentence.iter().enumerate() {
            out.push_str(&format!(
                "{i}\t{}\t{}\t{}\t{}\n",
                r.counts.tp, r.counts.fp, r.counts.fn_, r.annotator
            ));
        }
        out
    }
}

/// M² scorer over a fixed gold corpus.
#[derive(Debug, Clone)]
pub struct M2Scorer {
    pub gold: Vec<GoldAnnotation>,
    pub max_unchanged: usize,
    pub beta: f64,
}

/// Orders candidate outcomes: higher F, then more true positives, then fewer
/// false positives, then fewer false negatives, then the lower annotator.
fn better(a: (Counts, usize), b: (Counts, usize), beta: f64) -> bool {
    let (fa, fb) = (a.0.f_score(beta), b.0.f_score(beta));
    match fa.partial_cmp(&fb).unwrap_or(Ordering::Equal) {
        Ordering::Greater => return true,
        Ordering::Less => return false,
        Ordering::Equal => {}
    }
    (b.0.tp, a.0.fp, a.0.fn_, a.1) < (a.0.tp, b.0.fp, b.0.fn_, b.1)
}

impl M2Scorer {
    pub fn new(gold: Vec<GoldAnnotation>) -> Self {
        M2Scorer {
            gold,
            max_unchanged: DEFAULT_MAX_UNCHANGED,
            beta: DEFAULT_BETA,
        }
    }

    pub fn with_max_unchanged(mut self, max_unchanged: usize) -> Self {
        self.max_unchanged = max_unchanged;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// For each annotator, the Pareto frontier of achievable
    /// (true positives, false positives) over every way of grouping the
    /// hypothesis' base edits into system edits.
    ///
    /// Only the minimum false-positive count per true-positive count is kept:
    /// with the annotator fixed, F is increasing in tp and non-increasing in fp.
    fn frontiers(&self, index: usize, hyp: &TokenSentence) -> Vec<BTreeMap<usize, usize>> {
        let gold = &self.gold[index];
        let ops = align_words(gold.source.tokens(), hyp.tokens());
        let cand = extract_edits(&ops, hyp.tokens(), self.max_unchanged);
        let m = cand.base.len();

        gold.edit_sets
            .iter()
            .map(|set| {
                // reach[i]: tp -> min fp for groupings of base edits 0..i.
                let mut reach: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); m + 1];
                reach[0].insert(0, 0);
                for first in 0..m {
                    let from = std::mem::take(&mut reach[first]);
                    for last in first..m {
                        if !cand.can_join(first, last) {
                            break;
                        }
                        let span = cand.joined(first, last);
                        let hit = set.iter().any(|g| g.same_edit(&span));
                        for (&tp, &fp) in &from {
                            let (tp, fp) = if hit { (tp + 1, fp) } else { (tp, fp + 1) };
                            let slot = reach[last + 1].entry(tp).or_insert(fp);
                            *slot = (*slot).min(fp);
                        }
                    }
                    reach[first] = from;
                }
                reach.pop().unwrap_or_default()
            })
            .collect()
    }

    /// Best (counts, annotator) for one sentence given the counts accumulated
    /// so far; the returned counts are the sentence's own contribution.
    pub fn sentence_counts(
        &self,
        index: usize,
        hyp: &TokenSentence,
        running: Counts,
    ) -> SentenceResult {
        let gold = &self.gold[index];
        let mut best: Option<(Counts, usize)> = None;
        for (annotator, frontier) in self.frontiers(index, hyp).into_iter().enumerate() {
            let n_gold = gold.edit_sets[annotator].len();
            for (tp, fp) in frontier {
                let local = Counts::new(tp, fp, n_gold - tp);
                let candidate = (running + local, annotator);
                if best.is_none_or(|b| better(candidate, (running + b.0, b.1), self.beta)) {
                    best = Some((local, annotator));
                }
            }
        }
        let (counts, annotator) = best.expect("every sentence has an annotator and a grouping");
        SentenceResult { counts, annotator }
    }

    /// Corpus evaluation with greedy annotator choice in sentence order.
    pub fn evaluate(&self, hyps: &[TokenSentence]) -> Result<EvalReport> {
        if hyps.len() != self.gold.len() {
            return Err(Error::LengthMismatch {
                what: "gold sentences vs hypotheses",
                left: self.gold.len(),
                right: hyps.len(),
            });
        }
        let mut running = Counts::default();
        let mut per_sentence = Vec::with_capacity(hyps.len());
        for (i, hyp) in hyps.iter().enumerate() {
            let r = self.sentence_counts(i, hyp, running);
            running += r.counts;
            per_sentence.push(r);
        }
        Ok(EvalReport::from_counts(running, self.beta, per_sentence))
    }
}

/// Scores hypotheses against gold annotations with the M² procedure.
pub fn m2_evaluate(
    gold: &[GoldAnnotation],
    hyps: &[TokenSentence],
    max_unchanged: usize,
    beta: f64,
) -> Result<EvalReport> {
    M2Scorer::new(gold.to_vec())
        .with_max_unchanged(max_unchanged)
        .with_beta(beta)
        .evaluate(hyps)
}
