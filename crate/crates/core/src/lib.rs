//! Translation lexicon induction and cleaning.
//!
//! An initial graded lexicon is scored with G² over segment co-occurrence
//! counts. It is then cleaned iteratively: competitive linking within each
//! segment pair yields link counts, a two-binomial mixture is fitted to those
//! counts, and every entry is regraded by its log-likelihood ratio of being
//! correct.

pub mod assoc;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod io;
pub mod lexicon;
pub mod linker;
pub mod mixture;
pub mod pipeline;
pub mod simplex;
pub mod synth;

pub use error::{Error, Result};
