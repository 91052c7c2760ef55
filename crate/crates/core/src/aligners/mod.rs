//! Automatic sentence aligners.
//!
//! All aligners take a [`DocumentPair`](crate::corpus::DocumentPair) and return
//! [`SentenceAlignmentRecord`](crate::corpus::SentenceAlignmentRecord)s with
//! in-bounds indices and no combination emitted twice.

mod cats;
mod embed;
mod massalign;
mod tfidf;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cats::{align_cats_c3g, char_trigram_cosine};
pub use embed::{align_embed_threshold, read_embeddings, write_embeddings, EmbeddingTable};
pub use massalign::{align_massalign, vicinity_path};
pub use tfidf::{tfidf_cosine, TermVector, TfIdfModel};

/// German function words ignored by the TF-IDF similarity.
pub const GERMAN_STOPWORDS: &[&str] = &[
    "aber", "alle", "allem", "allen", "aller", "alles", "als", "also", "am", "an", "ander",
    "andere", "anderen", "auch", "auf", "aus", "bei", "bin", "bis", "bist", "da", "damit", "dann",
    "das", "dass", "dein", "deine", "dem", "den", "denn", "der", "des", "dich", "die", "dies",
    "diese", "diesem", "diesen", "dieser", "dieses", "dir", "doch", "dort", "du", "durch", "ein",
    "eine", "einem", "einen", "einer", "eines", "er", "es", "etwas", "euch", "euer", "für", "gegen",
    "hab", "habe", "haben", "hat", "hatte", "hier", "hin", "ich", "ihm", "ihn", "ihnen", "ihr",
    "ihre", "ihrem", "ihren", "ihrer", "im", "in", "ins", "ist", "ja", "jede", "jedem", "jeden",
    "jeder", "jetzt", "kann", "kein", "keine", "können", "man", "mein", "meine", "mit", "muss",
    "nach", "nicht", "nichts", "noch", "nun", "nur", "ob", "oder", "ohne", "sehr", "sein",
    "seine", "seinem", "seinen", "seiner", "sich", "sie", "sind", "so", "soll", "sollen", "über",
    "um", "und", "uns", "unser", "unter", "viel", "vom", "von", "vor", "war", "waren", "was",
    "weil", "wenn", "wer", "werden", "wie", "wieder", "will", "wir", "wird", "wo", "zu", "zum",
    "zur",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlignerConfig {
    /// Minimum embedding cosine for a 1:1 link.
    pub embed_threshold: f64,
    /// Minimum character-trigram cosine for a 1:1 link.
    pub cats_threshold: f64,
    /// How far ahead (in rows and columns) the vicinity search may jump.
    pub vicinity_radius: usize,
    /// Minimum TF-IDF cosine for a cell on the vicinity path to become a link.
    pub merge_threshold: f64,
    /// Embedding links additionally require the complex sentence's best match to point back.
    pub mutual_best: bool,
    pub stopword_list: BTreeSet<String>,
}

impl Default for AlignerConfig {
    fn default() -> Self {
        AlignerConfig {
            embed_threshold: 0.9,
            cats_threshold: 0.5,
            vicinity_radius: 3,
            merge_threshold: 0.35,
            mutual_best: false,
            stopword_list: GERMAN_STOPWORDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl AlignerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("embed_threshold", self.embed_threshold),
            ("cats_threshold", self.cats_threshold),
            ("merge_threshold", self.merge_threshold),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Config(format!("{name} must lie in [0,1], got {value}")));
            }
        }
        Ok(())
    }
}

/// Dense complex × simple score grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(f(i, j));
            }
        }
        SimilarityMatrix { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "cell ({row},{col}) out of bounds");
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }
}

/// Index of the maximum, ties going to the smaller index.
pub(crate) fn argmax(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best
}
