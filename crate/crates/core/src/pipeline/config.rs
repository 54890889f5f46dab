use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{parse_rules, Corrector, FileCorrector, IdentityCorrector, Lexicon, SpellChecker, Stage};
use crate::error::{read_to_string, Error, Result};
use crate::lm::NGramModel;
use crate::nbest::{parse_weights, ClassLmFeature, EditFeatures, FeatureAnnotator, LmFeature, PatternFeatures};
use crate::text::{BpeModel, WordClassMap};

/// A pipeline description, usually read from TOML:
///
/// ```toml
/// [[stages]]
/// kind = "corrector"
/// nbest_path = "smt.nbest"
///
/// [[stages]]
/// kind = "rescore"
/// weights_path = "weights.txt"
/// annotators = [{ kind = "edit" }, { kind = "lm", name = "LM", path = "lm.arpa" }]
///
/// [[stages]]
/// kind = "spellcheck"
/// lexicon_path = "lexicon.txt"
/// bpe_path = "bpe.codes"
/// char_lm_path = "chars.arpa"
/// word_lm_path = "lm.arpa"
/// ```
///
/// Relative paths resolve against the directory given to [`build`](Self::build).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub stages: Vec<StageConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StageConfig {
    /// Replays an n-best file, applies a rules file, or with neither passes
    /// sentences through.
    Corrector {
        nbest_path: Option<PathBuf>,
        rules_path: Option<PathBuf>,
    },
    Rescore {
        weights_path: PathBuf,
        #[serde(default)]
        annotators: Vec<AnnotatorConfig>,
    },
    Spellcheck {
        lexicon_path: PathBuf,
        bpe_path: PathBuf,
        char_lm_path: PathBuf,
        word_lm_path: PathBuf,
        #[serde(default = "one")]
        lambda_char: f64,
        #[serde(default = "one")]
        lambda_lm: f64,
        #[serde(default = "default_tau")]
        tau: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnnotatorConfig {
    Edit,
    Patterns {
        classes_path: PathBuf,
    },
    Lm {
        name: String,
        path: PathBuf,
        #[serde(default)]
        normalized: bool,
    },
    ClassLm {
        name: String,
        path: PathBuf,
        classes_path: PathBuf,
        #[serde(default)]
        normalized: bool,
    },
}

fn one() -> f64 {
    1.0
}

fn default_tau() -> f64 {
    super::DEFAULT_TAU
}

fn load_lm(path: &Path) -> Result<Arc<NGramModel>> {
    Ok(Arc::new(NGramModel::from_arpa(&read_to_string(path)?)?))
}

fn load_classes(path: &Path) -> Result<Arc<WordClassMap>> {
    Ok(Arc::new(WordClassMap::from_text(&read_to_string(path)?)?))
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::invalid(format!("pipeline config: {e}")))?;
        if cfg.stages.is_empty() {
            return Err(Error::invalid("pipeline config has no stages"));
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config types serialize")
    }

    /// Every file the configuration refers to, relative paths unresolved.
    pub fn input_paths(&self) -> Vec<&Path> {
        let mut out: Vec<&Path> = Vec::new();
        for stage in &self.stages {
            match stage {
                StageConfig::Corrector {
                    nbest_path,
                    rules_path,
                } => out.extend(nbest_path.iter().chain(rules_path).map(PathBuf::as_path)),
                StageConfig::Rescore {
                    weights_path,
                    annotators,
                } => {
                    out.push(weights_path);
                    for a in annotators {
                        match a {
                            AnnotatorConfig::Edit => {}
                            AnnotatorConfig::Patterns { classes_path } => out.push(classes_path),
                            AnnotatorConfig::Lm { path, .. } => out.push(path),
                            AnnotatorConfig::ClassLm {
                                path, classes_path, ..
                            } => {
                                out.push(path);
                                out.push(classes_path);
                            }
                        }
                    }
                }
                StageConfig::Spellcheck {
                    lexicon_path,
                    bpe_path,
                    char_lm_path,
                    word_lm_path,
                    ..
                } => out.extend([lexicon_path, bpe_path, char_lm_path, word_lm_path].map(PathBuf::as_path)),
            }
        }
        out
    }

    /// Loads every referenced model and returns runnable stages.
    pub fn build(&self, base_dir: &Path) -> Result<Vec<Stage>> {
        let at = |p: &Path| base_dir.join(p);
        self.stages
            .iter()
            .map(|stage| {
                let built = match stage {
                    StageConfig::Corrector {
                        nbest_path,
                        rules_path,
                    } => {
                        let c: Arc<dyn Corrector> = match (nbest_path, rules_path) {
                            (Some(_), Some(_)) => {
                                return Err(Error::invalid(
                                    "a corrector stage takes nbest_path or rules_path, not both",
                                ))
                            }
                            (Some(p), None) => {
                                Arc::new(FileCorrector::from_text(&read_to_string(at(p))?)?)
                            }
                            (None, Some(p)) => Arc::new(parse_rules(&read_to_string(at(p))?)?),
                            (None, None) => Arc::new(IdentityCorrector),
                        };
                        Stage::Correct(c)
                    }
                    StageConfig::Rescore {
                        weights_path,
                        annotators,
                    } => {
                        let model = parse_weights(&read_to_string(at(weights_path))?)?;
                        let annotators = annotators
                            .iter()
                            .map(|a| -> Result<Arc<dyn FeatureAnnotator>> {
                                Ok(match a {
                                    AnnotatorConfig::Edit => Arc::new(EditFeatures),
                                    AnnotatorConfig::Patterns { classes_path } => {
                                        Arc::new(PatternFeatures {
                                            classes: load_classes(&at(classes_path))?,
                                        })
                                    }
                                    AnnotatorConfig::Lm {
                                        name,
                                        path,
                                        normalized,
                                    } => Arc::new(LmFeature {
                                        name: name.clone(),
                                        model: load_lm(&at(path))?,
                                        normalized: *normalized,
                                    }),
                                    AnnotatorConfig::ClassLm {
                                        name,
                                        path,
                                        classes_path,
                                        normalized,
                                    } => Arc::new(ClassLmFeature {
                                        inner: LmFeature {
                                            name: name.clone(),
                                            model: load_lm(&at(path))?,
                                            normalized: *normalized,
                                        },
                                        classes: load_classes(&at(classes_path))?,
                                    }),
                                })
                            })
                            .collect::<Result<_>>()?;
                        Stage::Rescore { annotators, model }
                    }
                    StageConfig::Spellcheck {
                        lexicon_path,
                        bpe_path,
                        char_lm_path,
                        word_lm_path,
                        lambda_char,
                        lambda_lm,
                        tau,
                    } => {
                        let mut sc = SpellChecker::new(
                            Arc::new(Lexicon::from_text(&read_to_string(at(lexicon_path))?)?),
                            Arc::new(BpeModel::from_text(&read_to_string(at(bpe_path))?)?),
                            load_lm(&at(char_lm_path))?,
                            load_lm(&at(word_lm_path))?,
                        );
                        sc.lambda_char = *lambda_char;
                        sc.lambda_lm = *lambda_lm;
                        sc.tau = *tau;
                        Stage::Spell(Arc::new(sc))
                    }
                };
                Ok(built)
            })
            .collect()
    }
}
