use super::metric::{evaluate_model, TuningMetric};
use super::{LinearModel, NBestList};
use crate::error::{Error, Result};

/// LM weight used with M² tuning.
pub const M2_LM_WEIGHT: f64 = 0.2;
/// LM weight used with GLEU tuning.
pub const GLEU_LM_WEIGHT: f64 = 0.25;
pub const DEFAULT_LM_GRID: [f64; 11] = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// Selected grid value.
    pub value: f64,
    pub score: f64,
    /// `base` with the LM feature weighted by `-value`.
    pub model: LinearModel,
    /// Every `(value, score)` evaluated, in grid order.
    pub scores: Vec<(f64, f64)>,
}

/// Picks the LM weight that maximizes the corpus metric.
///
/// LM features are costs (negative log probabilities), so grid value `λ`
/// enters the model as weight `-λ`. Ties go to the smallest value.
pub fn grid_search_lm_weight(
    nbests: &[NBestList],
    metric: &TuningMetric<'_>,
    base: &LinearModel,
    feature: &str,
    grid: &[f64],
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::invalid("empty weight grid"));
    }
    if let Some(v) = grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite grid value {v}")));
    }
    let present = nbests
        .iter()
        .flat_map(|l| &l.hypotheses)
        .any(|h| h.features.contains(feature));
    if !present {
        return Err(Error::MissingFeature(feature.to_string()));
    }

    let mut scores = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64)> = None;
    for &value in grid {
        let mut model = base.clone();
        model.set(feature, -value);
        let score = evaluate_model(nbests, metric, &model)?;
        scores.push((value, score));
        if best.is_none_or(|(bv, bs)| score > bs || (score == bs && value < bv)) {
            best = Some((value, score));
        }
    }
    let (value, score) = best.expect("grid is non-empty");
    let mut model = base.clone();
    model.set(feature, -value);
    Ok(GridResult {
        value,
        score,
        model,
        scores,
    })
}
