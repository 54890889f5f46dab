//! Corrector composition: file-backed and rule-based correctors, the
//! subword-gated spell checker, rescoring stages and pipelines.

mod config;
mod corrector;
mod ensemble;
mod lexicon;
mod run;
mod spell;

pub use config::{AnnotatorConfig, PipelineConfig, StageConfig};
pub use corrector::{parse_rules, Corrector, FileCorrector, IdentityCorrector, RuleCorrector};
pub use ensemble::{combine_ensemble_scores, ENSEMBLE_FEATURE};
pub use lexicon::Lexicon;
pub use run::{pipeline_run, PipelineOutput, Stage};
pub use spell::{osa_distance, SpellChecker, DEFAULT_MAX_CANDIDATES, DEFAULT_TAU};
