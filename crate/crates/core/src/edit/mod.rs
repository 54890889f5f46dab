//! Edit alignment between a source and a hypothesis, edit-span extraction,
//! and the dense and sparse correction features built on top of them.

mod align;
mod extract;
mod features;

pub use align::{align, align_chars, align_words, distance, AlignmentOp, CharAlignment, OpCounts, OpKind};
pub use extract::{apply_edits, base_edits, extract_edits, EditCandidates, EditSpan};
pub use features::{
    dense_edit_features, sparse_pattern_features, FeatureVector, DENSE_FEATURE_NAMES,
};
