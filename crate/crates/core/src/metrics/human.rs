use super::gleu::{gleu_evaluate, GleuConfig};
use super::m2::{m2_evaluate, GoldAnnotation};
use crate::edit::apply_edits;
use crate::error::{Error, Result};
use crate::text::TokenSentence;

/// Published average human M² on the ten-annotator CoNLL-2014 extension.
pub const CONLL10_HUMAN_M2: f64 = 72.15;
/// Published best-system M² on the same data.
pub const CONLL10_SYSTEM_M2: f64 = 72.04;
/// Published average human GLEU on JFLEG Test (four annotators).
pub const JFLEG_HUMAN_GLEU: f64 = 62.38;
/// Published best-system GLEU on JFLEG Test.
pub const JFLEG_SYSTEM_GLEU: f64 = 61.50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaveOneOut {
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
}

/// Mean and population standard deviation of per-annotator scores, each
/// annotator having been scored against the remaining ones.
pub fn human_leave_one_out(scores: &[f64]) -> Result<LeaveOneOut> {
    if scores.len() < 2 {
        return Err(Error::invalid("leave-one-out needs at least 2 annotators"));
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    Ok(LeaveOneOut {
        mean,
        sd: var.sqrt(),
    })
}

/// System score as a percentage of the human mean.
pub fn human_ratio(system_score: f64, human_mean: f64) -> Result<f64> {
    if human_mean <= 0.0 {
        return Err(Error::invalid(format!("human mean {human_mean} must be positive")));
    }
    Ok(100.0 * system_score / human_mean)
}

fn annotator_count(gold: &[GoldAnnotation]) -> Result<usize> {
    let n = gold.first().map_or(0, GoldAnnotation::annotators);
    if n < 2 || gold.iter().any(|g| g.annotators() != n) {
        return Err(Error::invalid(
            "every sentence needs the same number (at least 2) of annotators",
        ));
    }
    Ok(n)
}

/// M² F-score of each annotator's corrected text against the others.
pub fn m2_leave_one_out_scores(
    gold: &[GoldAnnotation],
    max_unchanged: usize,
    beta: f64,
) -> Result<Vec<f64>> {
    let n = annotator_count(gold)?;
    (0..n)
        .map(|held_out| {
            let mut rest = Vec::with_capacity(gold.len());
            let mut hyps = Vec::with_capacity(gold.len());
            for g in gold {
                let corrected = apply_edits(g.source.tokens(), &g.edit_sets[held_out])?;
                hyps.push(TokenSentence::new(corrected));
                let others = g
                    .edit_sets
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| a != held_out)
                    .map(|(_, set)| set.clone())
                    .collect();
                rest.push(GoldAnnotation::new(g.source.clone(), others)?);
            }
            Ok(m2_evaluate(&rest, &hyps, max_unchanged, beta)?.f_score)
        })
        .collect()
}

/// GLEU of each reference set against the remaining references.
/// `references[s][a]` is annotator `a`'s correction of sentence `s`.
pub fn gleu_leave_one_out_scores(
    sources: &[TokenSentence],
    references: &[Vec<TokenSentence>],
    cfg: &GleuConfig,
) -> Result<Vec<f64>> {
    let n = references.first().map_or(0, Vec::len);
    if n < 2 || references.iter().any(|r| r.len() != n) {
        return Err(Error::invalid(
            "every sentence needs the same number (at least 2) of references",
        ));
    }
    (0..n)
        .map(|held_out| {
            let hyps: Vec<TokenSentence> = references.iter().map(|r| r[held_out].clone()).collect();
            let rest: Vec<Vec<TokenSentence>> = references
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(a, _)| a != held_out)
                        .map(|(_, s)| s.clone())
                        .collect()
                })
                .collect();
            gleu_evaluate(sources, &rest, &hyps, cfg)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit::EditSpan;

    #[test]
    fn published_ratios() {
        let conll = human_ratio(CONLL10_SYSTEM_M2, CONLL10_HUMAN_M2).unwrap();
        assert!((conll - 99.85).abs() < 0.01, "{conll}");
        let jfleg = human_ratio(JFLEG_SYSTEM_GLEU, JFLEG_HUMAN_GLEU).unwrap();
        assert!((jfleg - 98.59).abs() < 0.01, "{jfleg}");
        assert_eq!(human_ratio(3.0, 3.0).unwrap(), 100.0);
        assert!(human_ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn mean_and_population_sd() {
        let loo = human_leave_one_out(&[1.0, 3.0]).unwrap();
        assert_eq!(loo.mean, 2.0);
        assert_eq!(loo.sd, 1.0);
        assert!(human_leave_one_out(&[1.0]).is_err());
    }

    #[test]
    fn identical_annotators_agree_perfectly() {
        let set = vec![EditSpan::new(1, 2, &["goes"])];
        let g = GoldAnnotation::new(
            TokenSentence::from_line("he go home"),
            vec![set.clone(), set],
        )
        .unwrap();
        let scores = m2_leave_one_out_scores(&[g], 2, 0.5).unwrap();
        assert_eq!(scores, [1.0, 1.0]);
        let loo = human_leave_one_out(&scores).unwrap();
        assert_eq!((loo.mean, loo.sd), (1.0, 0.0));
    }
}
