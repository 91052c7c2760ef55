use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::fre::fre_german_sentences;
use crate::corpus::{classify_alignment_type, AlignmentType, Corpus, Document};
use crate::error::Result;
use crate::preprocess::word_count;

/// Population mean and standard deviation; both 0 for an empty sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    fn from_counts(values: &[usize]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanStd::default();
        }
        let sum: u128 = values.iter().map(|&v| v as u128).sum();
        let sq: u128 = values.iter().map(|&v| (v as u128) * (v as u128)).sum();
        let nf = n as f64;
        let mean = sum as f64 / nf;
        // n·Σx² − (Σx)² is exact in integers
        let var = (n as u128 * sq - sum * sum) as f64 / (nf * nf);
        MeanStd { mean, std: var.sqrt(), n }
    }

    /// Sorted before summing so the result does not depend on input order.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanStd::default();
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        MeanStd { mean, std: var.sqrt(), n }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStatsTable {
    pub n_pairs: usize,
    pub total_records: usize,
    /// Every alignment type, zero counts included.
    pub type_counts: BTreeMap<AlignmentType, usize>,
    /// Records per `(|complex|, |simple|)` shape.
    pub arity_counts: BTreeMap<(usize, usize), usize>,
    /// Sentence length in word tokens over all sentences of each side.
    pub complex_sentence_length: MeanStd,
    pub simple_sentence_length: MeanStd,
    /// Reading ease per document.
    pub complex_fre: MeanStd,
    pub simple_fre: MeanStd,
}

fn document_fre(doc: &Document) -> Option<f64> {
    fre_german_sentences(doc.sentences().iter().map(|s| s.text.as_str())).ok()
}

pub fn corpus_stats(corpus: &Corpus) -> Result<CorpusStatsTable> {
    let mut type_counts: BTreeMap<AlignmentType, usize> = AlignmentType::ALL.iter().map(|&t| (t, 0)).collect();
    let mut arity_counts = BTreeMap::new();
    let mut total_records = 0;
    let (mut c_len, mut s_len) = (Vec::new(), Vec::new());
    let (mut c_fre, mut s_fre) = (Vec::new(), Vec::new());
    for entry in &corpus.entries {
        for record in &entry.records {
            *type_counts.entry(classify_alignment_type(record, &entry.pair)?).or_insert(0) += 1;
            *arity_counts.entry(record.arity()).or_insert(0) += 1;
            total_records += 1;
        }
        c_len.extend(entry.pair.complex.sentences().iter().map(|s| word_count(&s.text)));
        s_len.extend(entry.pair.simple.sentences().iter().map(|s| word_count(&s.text)));
        c_fre.extend(document_fre(&entry.pair.complex));
        s_fre.extend(document_fre(&entry.pair.simple));
    }
    Ok(CorpusStatsTable {
        n_pairs: corpus.entries.len(),
        total_records,
        type_counts,
        arity_counts,
        complex_sentence_length: MeanStd::from_counts(&c_len),
        simple_sentence_length: MeanStd::from_counts(&s_len),
        complex_fre: MeanStd::from_values(&c_fre),
        simple_fre: MeanStd::from_values(&s_fre),
    })
}

impl CorpusStatsTable {
    /// `statistic<TAB>value` rows, reals with three decimals.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("statistic\tvalue\n");
        let _ = writeln!(out, "pairs\t{}", self.n_pairs);
        let _ = writeln!(out, "records\t{}", self.total_records);
        for (t, n) in &self.type_counts {
            let _ = writeln!(out, "type.{t}\t{n}");
        }
        for ((c, s), n) in &self.arity_counts {
            let _ = writeln!(out, "arity.{c}:{s}\t{n}");
        }
        for (name, v) in [
            ("complex.sentence_length", &self.complex_sentence_length),
            ("simple.sentence_length", &self.simple_sentence_length),
            ("complex.fre", &self.complex_fre),
            ("simple.fre", &self.simple_fre),
        ] {
            let _ = writeln!(out, "{name}.mean\t{:.3}", v.mean);
            let _ = writeln!(out, "{name}.std\t{:.3}", v.std);
        }
        out
    }
}
