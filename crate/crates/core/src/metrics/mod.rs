//! Simplification metrics and corpus statistics.

mod bleu;
mod fre;
mod ngrams;
mod sari;
mod stats;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::preprocess::segment_sentences;

pub use bleu::bleu;
pub use fre::{count_syllables_de, fre_german, fre_german_sentences};
pub use sari::sari;
pub use stats::{corpus_stats, CorpusStatsTable, MeanStd};

pub const METRIC_HEADER: &str = "system\tsari\tbleu\tfre\tn";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub system: String,
    pub sari: f64,
    pub bleu: f64,
    /// Reading ease of all outputs taken together.
    pub fre: f64,
    pub n_items: usize,
}

impl MetricReport {
    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{:.3}\t{:.3}\t{:.3}\t{}",
            self.system, self.sari, self.bleu, self.fre, self.n_items
        )
    }
}

/// Scores one system's outputs against single references.
pub fn evaluate_outputs(
    system: impl Into<String>,
    sources: &[&str],
    outputs: &[&str],
    references: &[&str],
) -> Result<MetricReport> {
    let sari = sari(sources, outputs, references)?;
    let bleu = bleu(outputs, references)?;
    let sentences: Vec<String> = outputs
        .iter()
        .flat_map(|o| segment_sentences(o).into_iter().map(|s| s.text))
        .collect();
    let fre = fre_german_sentences(sentences.iter().map(String::as_str))
        .map_err(|_| Error::Validation("outputs contain no words".into()))?;
    Ok(MetricReport {
        system: system.into(),
        sari,
        bleu,
        fre,
        n_items: outputs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_row() {
        let r = evaluate_outputs("ref", &["Das ist sehr gut."], &["Das ist gut."], &["Das ist gut."]).unwrap();
        assert_eq!(r.tsv_row(), "ref\t100.000\t100.000\t118.500\t1");
    }
}
