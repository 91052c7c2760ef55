//! Alignment evaluation as pairwise binary classification, and annotator agreement.

mod alignment;
mod kappa;

pub use alignment::{
    evaluate_against_corpus, evaluate_alignment, evaluate_alignment_sets, f_beta,
    AlignmentEvalReport, Counts, EvalSubset, REPORT_HEADER,
};
pub use kappa::{agreement_by_domain, build_combination_labels, cohen_kappa, AgreementReport};
