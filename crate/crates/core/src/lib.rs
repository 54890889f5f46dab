pub mod edit;
pub mod error;
pub mod lm;
pub mod metrics;
pub mod nbest;
pub mod pipeline;
pub mod synthetic;
pub mod text;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/text.md")]
    mod text {}
    #[doc = include_str!("../../../book/src/edits.md")]
    mod edits {}
    #[doc = include_str!("../../../book/src/lm.md")]
    mod lm {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/nbest.md")]
    mod nbest {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
