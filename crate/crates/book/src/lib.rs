//! The guide in `book/` included chapter by chapter, so `cargo test` runs
//! every Rust sample in it as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/corpus.md")]
pub mod corpus {}
#[doc = include_str!("../../../book/src/initial-lexicon.md")]
pub mod initial_lexicon {}
#[doc = include_str!("../../../book/src/competitive-linking.md")]
pub mod competitive_linking {}
#[doc = include_str!("../../../book/src/link-model.md")]
pub mod link_model {}
#[doc = include_str!("../../../book/src/cleaning.md")]
pub mod cleaning {}
#[doc = include_str!("../../../book/src/cutoffs.md")]
pub mod cutoffs {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/synthetic.md")]
pub mod synthetic {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
