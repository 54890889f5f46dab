use std::fmt;

use super::align::AlignmentOp;
use crate::error::{Error, Result};

/// A contiguous replacement of source tokens `start..end` by `correction`.
///
/// `start == end` is an insertion; an empty correction is a deletion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EditSpan {
    pub start: usize,
    pub end: usize,
    pub correction: Vec<String>,
    pub type_label: Option<String>,
}

impl EditSpan {
    pub fn new<S: AsRef<str>>(start: usize, end: usize, correction: &[S]) -> Self {
        EditSpan {
            start,
            end,
            correction: correction.iter().map(|s| s.as_ref().to_owned()).collect(),
            type_label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.type_label = Some(label.into());
        self
    }

    pub fn is_insertion(&self) -> bool {
        self.start == self.end
    }

    pub fn is_deletion(&self) -> bool {
        self.correction.is_empty()
    }

    /// Edits match on span and correction; the type label is ignored.
    pub fn same_edit(&self, other: &EditSpan) -> bool {
        self.start == other.start && self.end == other.end && self.correction == other.correction
    }
}

impl fmt::Display for EditSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})→{:?}", self.start, self.end, self.correction.join(" "))
    }
}

/// Candidate edits derived from one alignment.
///
/// `base` are the maximal runs of non-match operations, in source order;
/// applying all of them reproduces the hypothesis. `gaps[i]` is the number of
/// matched tokens between `base[i]` and `base[i + 1]`. `merged` holds every
/// span obtained by joining consecutive base edits whose gaps are all at most
/// `max_unchanged`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditCandidates {
    pub base: Vec<EditSpan>,
    pub gaps: Vec<usize>,
    pub merged: Vec<EditSpan>,
    pub max_unchanged: usize,
    hyp_ranges: Vec<(usize, usize)>,
    hyp: Vec<String>,
}

impl EditCandidates {
    /// Whether base edits `first..=last` may be joined into one span.
    pub fn can_join(&self, first: usize, last: usize) -> bool {
        first <= last && self.gaps[first..last].iter().all(|&g| g <= self.max_unchanged)
    }

    /// The single span covering base edits `first..=last`, including the
    /// unchanged tokens between them.
    pub fn joined(&self, first: usize, last: usize) -> EditSpan {
        let start = self.base[first].start;
        let end = self.base[last].end;
        let (h0, _) = self.hyp_ranges[first];
        let (_, h1) = self.hyp_ranges[last];
        EditSpan::new(start, end, &self.hyp[h0..h1])
    }

    pub fn all(&self) -> impl Iterator<Item = &EditSpan> {
        self.base.iter().chain(&self.merged)
    }
}

/// Builds base and merged candidate edits from an alignment of `src` to `hyp`.
pub fn extract_edits<S: AsRef<str>>(
    ops: &[AlignmentOp],
    hyp: &[S],
    max_unchanged: usize,
) -> EditCandidates {
    let mut base = Vec::new();
    let mut hyp_ranges = Vec::new();
    let mut gaps = Vec::new();

    // Source and hypothesis cursors, i.e. positions before the next op.
    let (mut s, mut h) = (0usize, 0usize);
    let mut run: Option<(usize, usize)> = None;
    let mut matched_since_last = 0usize;
    let hyp_owned: Vec<String> = hyp.iter().map(|t| t.as_ref().to_owned()).collect();

    let close = |run: &mut Option<(usize, usize)>, s: usize, h: usize, base: &mut Vec<EditSpan>, hyp_ranges: &mut Vec<(usize, usize)>| {
        if let Some((s0, h0)) = run.take() {
            base.push(EditSpan::new(s0, s, &hyp_owned[h0..h]));
            hyp_ranges.push((h0, h));
        }
    };

    for op in ops {
        if op.is_match() {
            close(&mut run, s, h, &mut base, &mut hyp_ranges);
            matched_since_last += 1;
        } else if run.is_none() {
            if !base.is_empty() {
                gaps.push(matched_since_last);
            }
            matched_since_last = 0;
            run = Some((s, h));
        }
        if op.src_index().is_some() {
            s += 1;
        }
        if op.hyp_index().is_some() {
            h += 1;
        }
    }
    close(&mut run, s, h, &mut base, &mut hyp_ranges);

    let mut candidates = EditCandidates {
        base,
        gaps,
        merged: Vec::new(),
        max_unchanged,
        hyp_ranges,
        hyp: hyp_owned,
    };
    let n = candidates.base.len();
    for first in 0..n {
        for last in first + 1..n {
            if !candidates.can_join(first, last) {
                break;
            }
            let span = candidates.joined(first, last);
            candidates.merged.push(span);
        }
    }
    candidates
}

/// Base (unmerged) edits only.
pub fn base_edits<S: AsRef<str>>(ops: &[AlignmentOp], hyp: &[S]) -> Vec<EditSpan> {
    extract_edits(ops, hyp, 0).base
}

/// Applies sorted, non-overlapping edits to `src`.
pub fn apply_edits<S: AsRef<str>>(src: &[S], edits: &[EditSpan]) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(src.len());
    let mut cursor = 0;
    for edit in edits {
        if edit.start < cursor || edit.start > edit.end || edit.end > src.len() {
            return Err(Error::invalid(format!(
                "edit {edit} overlaps, is unsorted, or exceeds source length {}",
                src.len()
            )));
        }
        out.extend(src[cursor..edit.start].iter().map(|t| t.as_ref().to_owned()));
        out.extend(edit.correction.iter().cloned());
        cursor = edit.end;
    }
    out.extend(src[cursor..].iter().map(|t| t.as_ref().to_owned()));
    Ok(out)
}
