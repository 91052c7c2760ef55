use std::collections::HashSet;

use serde::Serialize;

use super::tokenize::{levenshtein, word_count};

/// An aligned (complex, simple) text pair awaiting cleaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCandidate {
    pub complex: String,
    pub simple: String,
    pub origin_doc: String,
}

impl PairCandidate {
    pub fn new(
        complex: impl Into<String>,
        simple: impl Into<String>,
        origin_doc: impl Into<String>,
    ) -> Self {
        PairCandidate {
            complex: complex.into(),
            simple: simple.into(),
            origin_doc: origin_doc.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal {
    /// One side has at most one word token.
    Short,
    /// The sides differ by at most one character edit.
    NearIdentical,
    /// The exact text pair was already kept earlier.
    Duplicate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CleaningReport {
    pub removed_short: usize,
    pub removed_near_identical: usize,
    pub removed_duplicates: usize,
    pub kept: usize,
}

impl CleaningReport {
    pub fn total(&self) -> usize {
        self.removed_short + self.removed_near_identical + self.removed_duplicates + self.kept
    }
}

fn removal_for(candidate: &PairCandidate) -> Option<Removal> {
    if word_count(&candidate.complex) <= 1 || word_count(&candidate.simple) <= 1 {
        return Some(Removal::Short);
    }
    let len_gap = candidate
        .complex
        .chars()
        .count()
        .abs_diff(candidate.simple.chars().count());
    if len_gap <= 1 && levenshtein(&candidate.complex, &candidate.simple) <= 1 {
        return Some(Removal::NearIdentical);
    }
    None
}

/// Drops too-short pairs, near-identical pairs and repeated pairs, in that
/// order of precedence. Duplicates are detected across the whole input; the
/// first occurrence in input order survives.
pub fn clean_aligned_pairs(pairs: &[PairCandidate]) -> (Vec<PairCandidate>, CleaningReport) {
    let mut report = CleaningReport::default();
    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    let mut kept = Vec::new();
    for candidate in pairs {
        let removal = removal_for(candidate).or_else(|| {
            (!seen.insert((&candidate.complex, &candidate.simple))).then_some(Removal::Duplicate)
        });
        match removal {
            Some(Removal::Short) => report.removed_short += 1,
            Some(Removal::NearIdentical) => report.removed_near_identical += 1,
            Some(Removal::Duplicate) => report.removed_duplicates += 1,
            None => {
                report.kept += 1;
                kept.push(candidate.clone());
            }
        }
    }
    (kept, report)
}
