use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::align::{align_chars, align_words, AlignmentOp, OpCounts};
use super::extract::extract_edits;
use crate::text::{TokenSentence, WordClassMap};

/// Names of the dense edit features, in emission order.
pub const DENSE_FEATURE_NAMES: [&str; 9] = [
    "word_lev_dist",
    "n_sub",
    "n_ins",
    "n_del",
    "n_match",
    "char_dist",
    "char_sub",
    "char_ins",
    "char_del",
];

/// Named dense values plus sparse pattern counts.
///
/// Dense features keep insertion order, which is also their serialization
/// order. Sparse patterns are kept sorted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector {
    pub dense: IndexMap<String, f64>,
    pub sparse: BTreeMap<String, u32>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dense<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        FeatureVector {
            dense: values.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            sparse: BTreeMap::new(),
        }
    }

    /// Value of a feature, dense or sparse; absent features are zero.
    pub fn get(&self, name: &str) -> f64 {
        self.dense
            .get(name)
            .copied()
            .or_else(|| self.sparse.get(name).map(|&c| f64::from(c)))
            .unwrap_or(0.0)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.dense.contains_key(name) || self.sparse.contains_key(name)
    }

    /// All (name, value) pairs, dense first.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.dense
            .iter()
            .map(|(k, &v)| (k.as_str(), v))
            .chain(self.sparse.iter().map(|(k, &c)| (k.as_str(), f64::from(c))))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.dense
            .keys()
            .chain(self.sparse.keys())
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.dense.len() + self.sparse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dense.is_empty() && self.sparse.is_empty()
    }

    pub fn add_sparse(&mut self, pattern: impl Into<String>, count: u32) {
        *self.sparse.entry(pattern.into()).or_insert(0) += count;
    }

    /// True when every value is finite and every sparse count is at least 1.
    pub fn is_valid(&self) -> bool {
        self.dense.values().all(|v| v.is_finite()) && self.sparse.values().all(|&c| c >= 1)
    }
}

/// Word-level edit counts plus character-level counts over substituted pairs.
pub fn dense_edit_features(src: &TokenSentence, hyp: &TokenSentence) -> FeatureVector {
    let ops = align_words(src.tokens(), hyp.tokens());
    let words = OpCounts::from_ops(&ops);
    let mut chars = OpCounts::default();
    for op in &ops {
        if let AlignmentOp::Substitute { src: i, hyp: j } = *op {
            let c = align_chars(&src[i], &hyp[j]).counts;
            chars.substitutions += c.substitutions;
            chars.insertions += c.insertions;
            chars.deletions += c.deletions;
        }
    }
    let values = [
        words.edits(),
        words.substitutions,
        words.insertions,
        words.deletions,
        words.matches,
        chars.edits(),
        chars.substitutions,
        chars.insertions,
        chars.deletions,
    ];
    FeatureVector::with_dense(
        DENSE_FEATURE_NAMES
            .iter()
            .zip(values)
            .map(|(&name, v)| (name, v as f64)),
    )
}

/// Sparse correction patterns with one word of class context on each side.
///
/// Each maximal non-match region yields
/// `op(src→hyp)|L=<class of left word>|R=<class of right word>`, where `op`
/// is `sub`, `ins` or `del`, multi-token sides are joined with `_`, and the
/// sentence boundaries are written `<s>` and `</s>`.
pub fn sparse_pattern_features(
    src: &TokenSentence,
    hyp: &TokenSentence,
    classes: &WordClassMap,
) -> FeatureVector {
    let ops = align_words(src.tokens(), hyp.tokens());
    let edits = extract_edits(&ops, hyp.tokens(), 0).base;
    let mut fv = FeatureVector::new();
    for edit in edits {
        let from = src.tokens()[edit.start..edit.end].join("_");
        let to = edit.correction.join("_");
        let op = match (from.is_empty(), to.is_empty()) {
            (true, _) => "ins",
            (_, true) => "del",
            _ => "sub",
        };
        let left = match edit.start {
            0 => "<s>",
            i => classes.class_of(&src[i - 1]),
        };
        let right = if edit.end < src.len() {
            classes.class_of(&src[edit.end])
        } else {
            "</s>"
        };
        fv.add_sparse(format!("{op}({from}→{to})|L={left}|R={right}"), 1);
    }
    fv
}
