use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::{classify_alignment_type, AlignmentSet, AlignmentType, Corpus, IndexPair, SentenceAlignmentRecord};
use crate::error::{Error, Result};

/// Which gold records a report is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EvalSubset {
    #[default]
    All,
    OneToOne,
    NToM,
}

impl EvalSubset {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalSubset::All => "all",
            EvalSubset::OneToOne => "one_to_one",
            EvalSubset::NToM => "n_to_m",
        }
    }

    fn admits(self, record: &SentenceAlignmentRecord) -> bool {
        match self {
            EvalSubset::All => true,
            EvalSubset::OneToOne => record.is_one_to_one(),
            EvalSubset::NToM => record.is_n_to_m(),
        }
    }
}

impl fmt::Display for EvalSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EvalSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(EvalSubset::All),
            "1to1" | "one_to_one" => Ok(EvalSubset::OneToOne),
            "ntom" | "n_to_m" => Ok(EvalSubset::NToM),
            _ => Err(Error::Validation(format!("unknown subset {s:?}"))),
        }
    }
}

/// Confusion counts over expanded (complex, simple) combinations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

impl Counts {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn report(self, subset: EvalSubset, beta: f64) -> AlignmentEvalReport {
        let (p, r) = (self.precision(), self.recall());
        AlignmentEvalReport {
            tp: self.tp,
            fp: self.fp,
            fn_: self.fn_,
            precision: p,
            recall: r,
            f1: f_beta(p, r, 1.0),
            f_beta: f_beta(p, r, beta),
            beta,
            subset,
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// `(1+β²)·P·R / (β²·P + R)`, 0 when both are 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlignmentEvalReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f_beta: f64,
    pub beta: f64,
    pub subset: EvalSubset,
}

pub const REPORT_HEADER: &str = "tp\tfp\tfn\tprecision\trecall\tf1\tf_beta\tbeta\tsubset";

impl AlignmentEvalReport {
    pub fn counts(&self) -> Counts {
        Counts {
            tp: self.tp,
            fp: self.fp,
            fn_: self.fn_,
        }
    }

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{}",
            self.tp, self.fp, self.fn_, self.precision, self.recall, self.f1, self.f_beta, self.beta, self.subset
        )
    }

    /// Header plus one row, newline-terminated.
    pub fn to_tsv(&self) -> String {
        format!("{REPORT_HEADER}\n{}\n", self.tsv_row())
    }

    /// JSON object with reals rounded to three decimals.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"tp\":{},\"fp\":{},\"fn\":{},\"precision\":{:.3},\"recall\":{:.3},\"f1\":{:.3},\"f_beta\":{:.3},\"beta\":{:.3},\"subset\":\"{}\"}}",
            self.tp, self.fp, self.fn_, self.precision, self.recall, self.f1, self.f_beta, self.beta, self.subset
        )
    }
}

fn aligned_pairs<'a>(
    records: impl IntoIterator<Item = &'a SentenceAlignmentRecord>,
    keep: impl Fn(&SentenceAlignmentRecord) -> bool,
) -> BTreeSet<IndexPair> {
    records
        .into_iter()
        .filter(|r| r.counts_as_aligned() && keep(r))
        .flat_map(SentenceAlignmentRecord::expand_to_pairs)
        .collect()
}

fn count(full_gold: &BTreeSet<IndexPair>, subset_gold: &BTreeSet<IndexPair>, pred: &BTreeSet<IndexPair>) -> Counts {
    Counts {
        tp: pred.intersection(subset_gold).count(),
        fp: pred.difference(full_gold).count(),
        fn_: subset_gold.difference(pred).count(),
    }
}

fn pair_counts(gold: &[SentenceAlignmentRecord], pred: &[SentenceAlignmentRecord], subset: EvalSubset) -> Counts {
    let full = aligned_pairs(gold, |_| true);
    let restricted = aligned_pairs(gold, |r| subset.admits(r));
    let predicted = aligned_pairs(pred, |_| true);
    count(&full, &restricted, &predicted)
}

/// Scores predictions for one document pair.
///
/// True positives and false negatives are counted against the gold records of
/// `subset`; false positives against all gold records, so a correct link of
/// another arity class is never penalized. Records labeled partial or not
/// aligned are ignored on both sides.
pub fn evaluate_alignment(
    gold: &[SentenceAlignmentRecord],
    pred: &[SentenceAlignmentRecord],
    subset: EvalSubset,
    beta: f64,
) -> AlignmentEvalReport {
    pair_counts(gold, pred, subset).report(subset, beta)
}

fn check_known(gold: &AlignmentSet, pred: &AlignmentSet) -> Result<()> {
    let unknown: Vec<&str> = pred.pair_ids().filter(|id| !gold.contains_pair(id)).collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "predictions reference unknown pair_id(s): {}",
            unknown.join(", ")
        )))
    }
}

/// Sums per-pair counts over every pair in `gold`; pairs without predictions
/// contribute only false negatives.
pub fn evaluate_alignment_sets(
    gold: &AlignmentSet,
    pred: &AlignmentSet,
    subset: EvalSubset,
    beta: f64,
) -> Result<AlignmentEvalReport> {
    check_known(gold, pred)?;
    let mut total = Counts::default();
    for (id, records) in gold.iter() {
        total += pair_counts(records, pred.get(id).unwrap_or_default(), subset);
    }
    Ok(total.report(subset, beta))
}

/// Like [`evaluate_alignment_sets`] with the corpus records as gold. Predictions
/// are checked against document bounds. With `exclude_identical`, gold 1:1
/// records whose texts are identical are removed, and their combination is
/// dropped from the predictions as well.
pub fn evaluate_against_corpus(
    gold: &Corpus,
    pred: &AlignmentSet,
    subset: EvalSubset,
    beta: f64,
    exclude_identical: bool,
) -> Result<AlignmentEvalReport> {
    check_known(&gold.alignment_set(), pred)?;
    let mut total = Counts::default();
    for entry in &gold.entries {
        let predicted = pred.get(&entry.pair.pair_id).unwrap_or_default();
        for record in predicted {
            record.validate_against(&entry.pair)?;
        }
        if !exclude_identical {
            total += pair_counts(&entry.records, predicted, subset);
            continue;
        }
        let mut kept = Vec::new();
        let mut identical = BTreeSet::new();
        for record in &entry.records {
            if classify_alignment_type(record, &entry.pair)? == AlignmentType::Identical {
                identical.extend(record.expand_to_pairs());
            } else {
                kept.push(record.clone());
            }
        }
        let full = aligned_pairs(&kept, |_| true);
        let restricted = aligned_pairs(&kept, |r| subset.admits(r));
        let mut predicted = aligned_pairs(predicted, |_| true);
        predicted.retain(|p| !identical.contains(p));
        total += count(&full, &restricted, &predicted);
    }
    Ok(total.report(subset, beta))
}
