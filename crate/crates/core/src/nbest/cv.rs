use super::{average_weights, LinearModel, NBestList};
use crate::error::{Error, Result};

/// Round-robin assignment of `n` items to `folds` folds.
pub fn fold_split(n: usize, folds: usize) -> Result<Vec<Vec<usize>>> {
    if folds < 2 || folds > n {
        return Err(Error::invalid(format!(
            "cannot split {n} items into {folds} folds"
        )));
    }
    let mut out = vec![Vec::new(); folds];
    for i in 0..n {
        out[i % folds].push(i);
    }
    Ok(out)
}

/// Tunes once per fold on the other folds' lists and averages the weights.
///
/// Returns the averaged model followed by the per-fold models.
pub fn cross_validated_tune<F>(
    nbests: &[NBestList],
    folds: usize,
    tune: F,
) -> Result<(LinearModel, Vec<LinearModel>)>
where
    F: Fn(&[NBestList]) -> Result<LinearModel>,
{
    let split = fold_split(nbests.len(), folds)?;
    let mut models = Vec::with_capacity(folds);
    for held_out in &split {
        let train: Vec<NBestList> = nbests
            .iter()
            .enumerate()
            .filter(|(i, _)| !held_out.contains(i))
            .map(|(_, l)| l.clone())
            .collect();
        models.push(tune(&train)?);
    }
    Ok((average_weights(&models)?, models))
}
