use std::sync::Arc;

use rayon::prelude::*;

use super::{Corrector, SpellChecker};
use crate::error::{Error, Result};
use crate::nbest::{annotate_features, FeatureAnnotator, LinearModel, NBestList};
use crate::text::TokenSentence;

/// One pipeline step.
#[derive(Clone)]
pub enum Stage {
    /// Corrects the previous stage's 1-best.
    Correct(Arc<dyn Corrector>),
    /// Adds features to the current n-best lists and re-ranks them.
    Rescore {
        annotators: Vec<Arc<dyn FeatureAnnotator>>,
        model: LinearModel,
    },
    /// Spell-checks the previous stage's 1-best.
    Spell(Arc<SpellChecker>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    /// Final 1-best per sentence.
    pub output: Vec<TokenSentence>,
    /// `traces[stage][sentence]`: each stage's 1-best.
    pub traces: Vec<Vec<TokenSentence>>,
}

fn rescore(
    list: &NBestList,
    source: &TokenSentence,
    annotators: &[&dyn FeatureAnnotator],
    model: &LinearModel,
) -> Result<NBestList> {
    let mut lists = [list.clone()];
    annotate_features(&mut lists, std::slice::from_ref(source), annotators)?;
    let [mut list] = lists;
    for h in &mut list.hypotheses {
        h.model_score = model.score(&h.features);
    }
    // Stable, so equal scores keep their rank as in `linear_rescore`.
    list.hypotheses
        .sort_by(|a, b| b.model_score.total_cmp(&a.model_score));
    Ok(list)
}

fn run_stage(
    stage: &Stage,
    id: usize,
    source: &TokenSentence,
    current: &NBestList,
) -> Result<NBestList> {
    match stage {
        Stage::Correct(c) => {
            let mut out = c.correct(id, &current.best().tokens)?;
            out.sentence_id = id;
            Ok(out)
        }
        Stage::Rescore { annotators, model } => {
            let refs: Vec<&dyn FeatureAnnotator> = annotators.iter().map(|a| a.as_ref()).collect();
            // Annotators see the sentence under id 0 of a one-element corpus.
            let mut local = current.clone();
            local.sentence_id = 0;
            let mut out = rescore(&local, source, &refs, model)?;
            out.sentence_id = id;
            Ok(out)
        }
        Stage::Spell(sc) => Ok(NBestList::single(id, sc.correct(&current.best().tokens))),
    }
}

/// Runs `stages` left to right over `corpus`.
///
/// Sentence `i` has id `i`. Sentences within a stage run in parallel; output
/// order is input order. A failing stage aborts the run with its index.
pub fn pipeline_run(stages: &[Stage], corpus: &[TokenSentence]) -> Result<PipelineOutput> {
    if stages.is_empty() {
        return Err(Error::invalid("a pipeline needs at least one stage"));
    }
    let mut current: Vec<NBestList> = corpus
        .iter()
        .enumerate()
        .map(|(i, s)| NBestList::single(i, s.clone()))
        .collect();
    let mut traces = Vec::with_capacity(stages.len());
    for (index, stage) in stages.iter().enumerate() {
        current = current
            .par_iter()
            .enumerate()
            .map(|(i, list)| run_stage(stage, i, &corpus[i], list))
            .collect::<Result<_>>()
            .map_err(|e| Error::Stage {
                index,
                source: Box::new(e),
            })?;
        traces.push(current.iter().map(|l| l.best().tokens.clone()).collect());
    }
    Ok(PipelineOutput {
        output: current.iter().map(|l| l.best().tokens.clone()).collect(),
        traces,
    })
}
