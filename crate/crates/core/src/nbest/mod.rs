//! N-best lists, feature annotation, linear rescoring and weight tuning.

mod annotate;
mod cv;
mod format;
mod grid;
mod mert;
mod metric;
mod mira;

use std::collections::BTreeMap;

pub use annotate::{
    annotate_features, ClassLmFeature, EditFeatures, FeatureAnnotator, LmFeature, PatternFeatures,
};
pub use cv::{cross_validated_tune, fold_split};
pub use format::{parse_nbest, parse_weights, write_nbest, write_weights};
pub use grid::{grid_search_lm_weight, GridResult, DEFAULT_LM_GRID, GLEU_LM_WEIGHT, M2_LM_WEIGHT};
pub use mert::{envelope, line_profile, line_search, mert_tune, LineOptimum, MertConfig, Segment};
pub use metric::{evaluate_model, CorpusFn, GleuMetric, M2Metric, SentenceMetric, TuningMetric};
pub use mira::{mira_tune, MiraConfig};

use crate::edit::FeatureVector;
use crate::error::{Error, Result};
use crate::text::TokenSentence;

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub tokens: TokenSentence,
    pub features: FeatureVector,
    pub model_score: f64,
}

impl Hypothesis {
    pub fn new(tokens: TokenSentence, features: FeatureVector, model_score: f64) -> Self {
        Hypothesis {
            tokens,
            features,
            model_score,
        }
    }
}

/// Ranked hypotheses for one input sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct NBestList {
    pub sentence_id: usize,
    pub hypotheses: Vec<Hypothesis>,
}

impl NBestList {
    /// Orders hypotheses by descending model score, keeping the given order
    /// among equal scores.
    pub fn new(sentence_id: usize, mut hypotheses: Vec<Hypothesis>) -> Result<Self> {
        if hypotheses.is_empty() {
            return Err(Error::invalid(format!(
                "n-best list for sentence {sentence_id} is empty"
            )));
        }
        if let Some(h) = hypotheses.iter().find(|h| !h.model_score.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite model score {} in sentence {sentence_id}",
                h.model_score
            )));
        }
        hypotheses.sort_by(|a, b| b.model_score.total_cmp(&a.model_score));
        Ok(NBestList {
            sentence_id,
            hypotheses,
        })
    }

    /// A list holding one hypothesis with no features.
    pub fn single(sentence_id: usize, tokens: TokenSentence) -> Self {
        NBestList {
            sentence_id,
            hypotheses: vec![Hypothesis::new(tokens, FeatureVector::new(), 0.0)],
        }
    }

    pub fn best(&self) -> &Hypothesis {
        &self.hypotheses[0]
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }
}

/// Feature weights; features without a weight count as zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearModel {
    pub weights: BTreeMap<String, f64>,
}

impl LinearModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weights<I, S>(weights: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        LinearModel {
            weights: weights.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn weight(&self, name: &str) -> f64 {
        self.weights.get(name).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.weights.insert(name.into(), value);
    }

    pub fn score(&self, features: &FeatureVector) -> f64 {
        features.iter().map(|(name, v)| self.weight(name) * v).sum()
    }

    pub fn scaled(&self, factor: f64) -> LinearModel {
        LinearModel {
            weights: self.weights.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }
}

/// Result of a tuning run.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub model: LinearModel,
    /// Tuning-set metric of `model`.
    pub score: f64,
    /// Metric at the start and after each accepted MERT move or MIRA epoch.
    pub history: Vec<f64>,
}

/// Index and hypothesis with the highest model score; ties go to the lower
/// index.
pub fn linear_rescore<'a>(nbest: &'a NBestList, model: &LinearModel) -> (usize, &'a Hypothesis) {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, h) in nbest.hypotheses.iter().enumerate() {
        let s = model.score(&h.features);
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    (best, &nbest.hypotheses[best])
}

/// Per-feature mean; a feature missing from a model contributes zero.
pub fn average_weights(models: &[LinearModel]) -> Result<LinearModel> {
    if models.is_empty() {
        return Err(Error::invalid("cannot average an empty list of models"));
    }
    let mut sum: BTreeMap<String, f64> = BTreeMap::new();
    for m in models {
        for (k, v) in &m.weights {
            *sum.entry(k.clone()).or_insert(0.0) += v;
        }
    }
    let n = models.len() as f64;
    Ok(LinearModel {
        weights: sum.into_iter().map(|(k, v)| (k, v / n)).collect(),
    })
}
