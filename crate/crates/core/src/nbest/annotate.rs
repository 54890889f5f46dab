use std::sync::Arc;

use rayon::prelude::*;

use super::NBestList;
use crate::edit::{dense_edit_features, sparse_pattern_features, FeatureVector};
use crate::error::{Error, Result};
use crate::lm::{project_to_classes, LanguageModel};
use crate::text::{TokenSentence, WordClassMap};

/// A feature function over (source, hypothesis) pairs.
pub trait FeatureAnnotator: Send + Sync {
    fn annotate(&self, source: &TokenSentence, hyp: &TokenSentence) -> FeatureVector;
}

/// The nine dense edit features.
#[derive(Debug, Clone, Copy, Default)]
pub struct EditFeatures;

impl FeatureAnnotator for EditFeatures {
    fn annotate(&self, source: &TokenSentence, hyp: &TokenSentence) -> FeatureVector {
        dense_edit_features(source, hyp)
    }
}

/// Sparse correction patterns over word classes.
#[derive(Debug, Clone)]
pub struct PatternFeatures {
    pub classes: Arc<WordClassMap>,
}

impl FeatureAnnotator for PatternFeatures {
    fn annotate(&self, source: &TokenSentence, hyp: &TokenSentence) -> FeatureVector {
        sparse_pattern_features(source, hyp, &self.classes)
    }
}

/// Negative natural-log LM probability of the hypothesis.
#[derive(Clone)]
pub struct LmFeature {
    pub name: String,
    pub model: Arc<dyn LanguageModel>,
    /// Use the per-position score instead of the sentence total.
    pub normalized: bool,
}

impl LmFeature {
    pub fn new(name: impl Into<String>, model: Arc<dyn LanguageModel>) -> Self {
        LmFeature {
            name: name.into(),
            model,
            normalized: false,
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }
}

impl FeatureAnnotator for LmFeature {
    fn annotate(&self, _source: &TokenSentence, hyp: &TokenSentence) -> FeatureVector {
        let s = self.model.score(hyp);
        let value = if self.normalized { s.normalized } else { s.logprob };
        FeatureVector::with_dense([(self.name.clone(), -value)])
    }
}

/// An LM feature computed on the word-class projection of the hypothesis.
#[derive(Clone)]
pub struct ClassLmFeature {
    pub inner: LmFeature,
    pub classes: Arc<WordClassMap>,
}

impl FeatureAnnotator for ClassLmFeature {
    fn annotate(&self, source: &TokenSentence, hyp: &TokenSentence) -> FeatureVector {
        self.inner
            .annotate(source, &project_to_classes(hyp, &self.classes))
    }
}

fn merge_into(target: &mut FeatureVector, extra: FeatureVector) -> Result<()> {
    for name in extra.names() {
        if target.contains(name) {
            return Err(Error::FeatureCollision(name.to_string()));
        }
    }
    target.dense.extend(extra.dense);
    target.sparse.extend(extra.sparse);
    Ok(())
}

/// Adds every annotator's features to every hypothesis.
///
/// `sentence_id` indexes `sources`. A feature name that is already present,
/// or produced by two annotators, is an error.
pub fn annotate_features(
    nbests: &mut [NBestList],
    sources: &[TokenSentence],
    annotators: &[&dyn FeatureAnnotator],
) -> Result<()> {
    nbests.par_iter_mut().try_for_each(|list| {
        let source = sources
            .get(list.sentence_id)
            .ok_or(Error::MissingSentence(list.sentence_id))?;
        for hyp in &mut list.hypotheses {
            for annotator in annotators {
                let extra = annotator.annotate(source, &hyp.tokens);
                merge_into(&mut hyp.features, extra)?;
            }
        }
        Ok(())
    })
}
