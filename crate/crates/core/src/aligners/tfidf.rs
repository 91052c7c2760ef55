use std::collections::{BTreeMap, HashMap, HashSet};

use crate::preprocess::word_tokens;

/// TF-IDF weighting fitted over a set of sentences.
///
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, so unseen terms get `df = 0`
/// and every weight stays positive.
#[derive(Debug, Clone)]
pub struct TfIdfModel {
    vocabulary: HashMap<String, usize>,
    idf: Vec<f64>,
    fitted: usize,
    stopwords: HashSet<String>,
}

/// L2-normalized sparse vector, sorted by term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermVector(Vec<(String, f64)>);

impl TermVector {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.0
    }

    /// Dot product of two normalized vectors, clamped to `[0, 1]`.
    pub fn cosine(&self, other: &TermVector) -> f64 {
        let (mut i, mut j, mut dot) = (0, 0, 0.0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    dot += self.0[i].1 * other.0[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        dot.clamp(0.0, 1.0)
    }
}

impl TfIdfModel {
    pub fn fit<I, S>(sentences: I, stopwords: &HashSet<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut model = TfIdfModel {
            vocabulary: HashMap::new(),
            idf: Vec::new(),
            fitted: 0,
            stopwords: stopwords.clone(),
        };
        let mut df: Vec<usize> = Vec::new();
        for sentence in sentences {
            model.fitted += 1;
            let distinct: HashSet<String> = model.terms(sentence.as_ref()).into_iter().collect();
            for term in distinct {
                let next = model.vocabulary.len();
                let id = *model.vocabulary.entry(term).or_insert(next);
                if id == df.len() {
                    df.push(0);
                }
                df[id] += 1;
            }
        }
        let n = model.fitted as f64;
        model.idf = df
            .iter()
            .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
            .collect();
        model
    }

    /// Lowercased word tokens minus stopwords.
    pub fn terms(&self, text: &str) -> Vec<String> {
        word_tokens(text)
            .map(|t| t.text.to_lowercase())
            .filter(|t| !self.stopwords.contains(t))
            .collect()
    }

    pub fn fitted_count(&self) -> usize {
        self.fitted
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn idf(&self, term: &str) -> f64 {
        match self.vocabulary.get(term) {
            Some(&id) => self.idf[id],
            None => (1.0 + self.fitted as f64).ln() + 1.0,
        }
    }

    pub fn vector(&self, text: &str) -> TermVector {
        let mut tf: BTreeMap<String, f64> = BTreeMap::new();
        for term in self.terms(text) {
            *tf.entry(term).or_default() += 1.0;
        }
        let mut weights: Vec<(String, f64)> = tf
            .into_iter()
            .map(|(term, count)| {
                let w = count * self.idf(&term);
                (term, w)
            })
            .collect();
        let norm = weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm == 0.0 {
            return TermVector::default();
        }
        for (_, w) in &mut weights {
            *w /= norm;
        }
        TermVector(weights)
    }
}

/// Cosine of the TF-IDF vectors of two texts; 0 when either has no terms.
pub fn tfidf_cosine(model: &TfIdfModel, a: &str, b: &str) -> f64 {
    model.vector(a).cosine(&model.vector(b))
}
