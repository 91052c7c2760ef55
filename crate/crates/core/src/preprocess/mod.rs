//! Segmentation, tokenization and sentence-pair cleaning.

mod clean;
mod segment;
mod tokenize;

pub use clean::{clean_aligned_pairs, CleaningReport, PairCandidate, Removal};
pub use segment::{
    document_from_text, load_abbreviations, parse_abbreviations, segment_sentences, RuleSplitter, SentenceSplitter,
    DEFAULT_ABBREVIATIONS,
};
pub use tokenize::{levenshtein, tokenize, word_count, word_tokens, Token};
