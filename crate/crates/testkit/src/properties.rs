//! Property bodies shared by the unit suites and the acceptance runner.
//! Each returns `Err` with a description of the first violated expectation.

use std::collections::BTreeSet;

use plainalign_core::aligners::{
    align_cats_c3g, align_embed_threshold, align_massalign, AlignerConfig, EmbeddingTable,
};
use plainalign_core::corpus::{
    classify_alignment_type, load_corpus, save_corpus, Corpus, Document, DocumentPair, DomainTag, IndexPair,
    SentenceAlignmentRecord,
};
use plainalign_core::eval::{evaluate_alignment, EvalSubset};
use plainalign_core::metrics::corpus_stats;
use plainalign_core::preprocess::levenshtein;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<(), TestCaseError>;

pub fn round_trip(corpus: &Corpus) -> Outcome {
    let dir = tempfile_dir()?;
    save_corpus(dir.path(), corpus).map_err(fail)?;
    let back = load_corpus(&dir.path().join("manifest.tsv"), Some(&dir.path().join("alignments.tsv"))).map_err(fail)?;
    prop_assert_eq!(&back, corpus);
    Ok(())
}

fn tempfile_dir() -> Result<tempfile::TempDir, TestCaseError> {
    tempfile::tempdir().map_err(fail)
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn levenshtein_axioms(a: &str, b: &str, c: &str) -> Outcome {
    let (ab, ba, bc, ac) = (levenshtein(a, b), levenshtein(b, a), levenshtein(b, c), levenshtein(a, c));
    prop_assert_eq!(ab, ba, "symmetry");
    prop_assert_eq!(ab == 0, a == b, "identity of indiscernibles");
    prop_assert!(ac <= ab + bc, "triangle inequality");
    Ok(())
}

pub fn expansion_cardinality(record: &SentenceAlignmentRecord) -> Outcome {
    let pairs = record.expand_to_pairs();
    let (n, m) = record.arity();
    prop_assert_eq!(pairs.len(), n * m);
    prop_assert_eq!(pairs.iter().collect::<BTreeSet<_>>().len(), n * m);
    Ok(())
}

pub fn classification_total(corpus: &Corpus) -> Outcome {
    for entry in &corpus.entries {
        for record in &entry.records {
            classify_alignment_type(record, &entry.pair).map_err(fail)?;
        }
    }
    Ok(())
}

pub fn gold_against_itself(gold: &[SentenceAlignmentRecord]) -> Outcome {
    let rep = evaluate_alignment(gold, gold, EvalSubset::All, 0.5);
    if gold.iter().any(|r| !r.expand_to_pairs().is_empty()) {
        prop_assert_eq!((rep.precision, rep.recall, rep.f1, rep.f_beta), (1.0, 1.0, 1.0, 1.0));
    }
    prop_assert_eq!(rep.fp + rep.fn_, 0);
    Ok(())
}

fn pairs_of(records: &[SentenceAlignmentRecord]) -> BTreeSet<IndexPair> {
    records.iter().flat_map(|r| r.expand_to_pairs()).collect()
}

/// Every record in bounds, no combination twice.
pub fn well_formed(pair: &DocumentPair, records: &[SentenceAlignmentRecord]) -> Outcome {
    let mut seen = BTreeSet::new();
    for r in records {
        r.validate_against(pair).map_err(fail)?;
        for p in r.expand_to_pairs() {
            prop_assert!(seen.insert(p), "combination {:?} emitted twice", p);
        }
    }
    Ok(())
}

/// Sorting by smallest complex index gives non-decreasing smallest simple indices.
pub fn non_crossing(records: &[SentenceAlignmentRecord]) -> Outcome {
    let mut firsts: Vec<(usize, usize)> = records
        .iter()
        .filter(|r| !r.complex().is_empty() && !r.simple().is_empty())
        .map(|r| (r.complex()[0], r.simple()[0]))
        .collect();
    firsts.sort();
    for w in firsts.windows(2) {
        prop_assert!(w[0].1 <= w[1].1, "crossing records at {:?}", w);
    }
    Ok(())
}

pub fn massalign_threshold_monotone(pair: &DocumentPair, lo: f64, hi: f64) -> Outcome {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let at = |t: f64| align_massalign(pair, &AlignerConfig { merge_threshold: t, ..Default::default() });
    let (a, b) = (at(lo).map_err(fail)?, at(hi).map_err(fail)?);
    well_formed(pair, &a)?;
    non_crossing(&a)?;
    prop_assert!(pairs_of(&b).is_subset(&pairs_of(&a)), "raising the threshold added links");
    Ok(())
}

pub fn cats_threshold_monotone(pair: &DocumentPair, lo: f64, hi: f64) -> Outcome {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let at = |t: f64| align_cats_c3g(pair, &AlignerConfig { cats_threshold: t, ..Default::default() });
    let (a, b) = (at(lo).map_err(fail)?, at(hi).map_err(fail)?);
    well_formed(pair, &a)?;
    prop_assert!(a.iter().all(SentenceAlignmentRecord::is_one_to_one));
    prop_assert!(b.iter().all(|r| a.contains(r)), "raising the threshold added links");
    Ok(())
}

pub fn embed_threshold_monotone(
    pair: &DocumentPair,
    tables: (&EmbeddingTable, &EmbeddingTable),
    lo: f64,
    hi: f64,
    mutual_best: bool,
) -> Outcome {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let at = |t: f64| {
        align_embed_threshold(pair, tables, &AlignerConfig { embed_threshold: t, mutual_best, ..Default::default() })
    };
    let (a, b) = (at(lo).map_err(fail)?, at(hi).map_err(fail)?);
    well_formed(pair, &a)?;
    prop_assert!(a.iter().all(SentenceAlignmentRecord::is_one_to_one));
    prop_assert!(b.iter().all(|r| a.contains(r)), "raising the threshold added links");
    Ok(())
}

fn self_pair(doc: &Document) -> DocumentPair {
    let mut other = doc.clone();
    other.doc_id = format!("{}-copy", doc.doc_id);
    DocumentPair::new("self", doc.clone(), other, DomainTag::Other).unwrap()
}

/// Every aligner on (D, D) is fully precise against the diagonal.
pub fn self_alignment(doc: &Document, vectors: &EmbeddingTable) -> Outcome {
    let pair = self_pair(doc);
    let cfg = AlignerConfig::default();
    let diagonal: BTreeSet<IndexPair> = (0..doc.len()).map(|i| (i, i)).collect();
    let mass = align_massalign(&pair, &cfg).map_err(fail)?;
    let cats = align_cats_c3g(&pair, &cfg).map_err(fail)?;
    let embed = align_embed_threshold(&pair, (vectors, vectors), &cfg).map_err(fail)?;
    for (name, records) in [("massalign", &mass), ("cats", &cats), ("embed", &embed)] {
        let got = pairs_of(records);
        prop_assert!(got.is_subset(&diagonal), "{} left the diagonal: {:?}", name, got);
    }
    // the path visits every diagonal cell, each with similarity 1
    prop_assert_eq!(pairs_of(&mass), diagonal.clone());
    prop_assert_eq!(pairs_of(&embed), diagonal);
    Ok(())
}

/// Shuffling pairs and records changes nothing in the statistics.
pub fn stats_permutation_invariant(corpus: &Corpus, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = corpus.clone();
    shuffled.entries.shuffle(&mut rng);
    for entry in &mut shuffled.entries {
        entry.records.shuffle(&mut rng);
    }
    let (a, b) = (corpus_stats(corpus).map_err(fail)?, corpus_stats(&shuffled).map_err(fail)?);
    prop_assert_eq!(a.total_records, a.type_counts.values().sum::<usize>());
    prop_assert_eq!(a, b);
    Ok(())
}

/// One random vector per sentence.
pub fn embedding_table(len: usize, dim: usize) -> impl Strategy<Value = EmbeddingTable> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), len)
        .prop_map(move |v| EmbeddingTable::new(dim, v).unwrap())
}
