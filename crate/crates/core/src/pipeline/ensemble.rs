use crate::error::{Error, Result};
use crate::nbest::NBestList;

pub const ENSEMBLE_FEATURE: &str = "ens";

/// Adds feature `ens = Σ weight_i · column_i[h]` to every hypothesis `h`.
///
/// Columns are per-hypothesis scores already in negative log space, so
/// adding them multiplies the underlying probabilities.
pub fn combine_ensemble_scores(
    nbest: &mut NBestList,
    columns: &[(&str, &[f64])],
    weights: &[f64],
) -> Result<()> {
    if columns.len() != weights.len() {
        return Err(Error::LengthMismatch {
            what: "score columns vs weights",
            left: columns.len(),
            right: weights.len(),
        });
    }
    for (name, col) in columns {
        if col.len() != nbest.hypotheses.len() {
            return Err(Error::invalid(format!(
                "column `{name}` has {} scores for {} hypotheses in sentence {}",
                col.len(),
                nbest.hypotheses.len(),
                nbest.sentence_id
            )));
        }
    }
    if nbest.hypotheses.iter().any(|h| h.features.contains(ENSEMBLE_FEATURE)) {
        return Err(Error::FeatureCollision(ENSEMBLE_FEATURE.to_string()));
    }
    for (k, h) in nbest.hypotheses.iter_mut().enumerate() {
        let value = columns
            .iter()
            .zip(weights)
            .map(|((_, col), w)| w * col[k])
            .sum();
        h.features.dense.insert(ENSEMBLE_FEATURE.to_string(), value);
    }
    Ok(())
}
