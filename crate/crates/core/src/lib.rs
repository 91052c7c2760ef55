//! Building blocks for monolingual parallel (complex → simplified) corpora.
//!
//! * [`corpus`] holds the data model and the on-disk formats.
//! * [`preprocess`] segments, tokenizes and cleans sentence pairs.
//! * [`aligners`] produces sentence alignments for a document pair.
//! * [`eval`] scores alignments against gold and measures annotator agreement.
//! * [`metrics`] computes SARI, BLEU, German Flesch reading ease and corpus statistics.

pub mod aligners;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod metrics;
pub mod preprocess;

pub use error::{Error, Result};
