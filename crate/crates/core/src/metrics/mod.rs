//! Evaluation: M² edit-based scoring, GLEU, and human-comparison arithmetic.

mod fscore;
mod gleu;
mod human;
mod m2;
mod m2_format;

pub use fscore::{fbeta, precision, recall, Counts};
pub use gleu::{gleu_evaluate, gleu_from_stats, gleu_sentence_stats, GleuConfig};
pub use human::{
    gleu_leave_one_out_scores, human_leave_one_out, human_ratio, m2_leave_one_out_scores,
    LeaveOneOut, CONLL10_HUMAN_M2, CONLL10_SYSTEM_M2, JFLEG_HUMAN_GLEU, JFLEG_SYSTEM_GLEU,
};
pub use m2::{
    m2_evaluate, EvalReport, GoldAnnotation, M2Scorer, SentenceResult, DEFAULT_BETA,
    DEFAULT_MAX_UNCHANGED,
};
pub use m2_format::{parse_m2, write_m2};
