//! Synthetic corpora with known ("planted") alignments.
//!
//! Every record gets its own content words, which appear on both sides of the
//! record and nowhere else. The rest of each sentence is filler: stopwords
//! plus a few common words drawn from a small shared pool, shuffled.
//!
//! [`strategies`] holds proptest generators for documents, records and corpora.

pub mod properties;
pub mod strategies;

use plainalign_core::aligners::EmbeddingTable;
use plainalign_core::corpus::{
    Corpus, CorpusEntry, Document, DocumentPair, DomainTag, SentenceAlignmentRecord,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STOPWORDS: &[&str] = &["der", "die", "und", "ist", "mit", "auf", "für", "das", "ein", "nicht"];
const COMMON: &[&str] = &[
    "heute", "Stadt", "Leute", "Jahr", "neu", "groß", "Zeit", "Haus", "viele", "gut", "Weg", "klein",
];
const SYLLABLES: &[&str] = &[
    "ka", "lo", "mi", "ter", "ban", "sel", "ru", "fen", "dor", "gi", "wal", "nus", "pe", "zar",
    "hol", "tin", "bre", "mau", "sko", "lep",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedShape {
    OneToOne,
    Split,
    Merge,
}

#[derive(Debug, Clone)]
pub struct PlantedCorpusConfig {
    pub documents: usize,
    pub paragraphs: (usize, usize),
    pub records_per_paragraph: (usize, usize),
    pub content_words: (usize, usize),
    pub filler_words: (usize, usize),
    /// Relative weights of 1:1, 1:2 and 2:1 records.
    pub shape_weights: [u32; 3],
    /// Simple-side rewording: up to this many content words are dropped and
    /// replaced by fresh words that occur nowhere else.
    pub rewording: usize,
    pub embedding_dim: usize,
}

impl Default for PlantedCorpusConfig {
    fn default() -> Self {
        PlantedCorpusConfig {
            documents: 30,
            paragraphs: (2, 4),
            records_per_paragraph: (2, 4),
            content_words: (2, 5),
            filler_words: (2, 4),
            shape_weights: [6, 2, 2],
            rewording: 1,
            embedding_dim: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    /// Documents with the planted records as gold.
    pub corpus: Corpus,
    /// Complex and simple embedding tables, parallel to `corpus.entries`.
    /// All sentences of one record share one random unit vector.
    pub embeddings: Vec<(EmbeddingTable, EmbeddingTable)>,
}

struct Generator {
    rng: ChaCha8Rng,
    next_word: usize,
    cfg: PlantedCorpusConfig,
}

impl Generator {
    fn range(&mut self, (lo, hi): (usize, usize)) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// A fresh pseudo-word, never produced before by this generator.
    fn content_word(&mut self) -> String {
        let mut k = self.next_word;
        self.next_word += 1;
        let n = SYLLABLES.len();
        let mut word = String::new();
        for _ in 0..3 {
            word.push_str(SYLLABLES[k % n]);
            k /= n;
        }
        while k > 0 {
            word.push_str(SYLLABLES[k % n]);
            k /= n;
        }
        let mut chars = word.chars();
        let first = chars.next().unwrap().to_uppercase().collect::<String>();
        first + chars.as_str()
    }

    fn content(&mut self) -> Vec<String> {
        let n = self.range(self.cfg.content_words);
        (0..n).map(|_| self.content_word()).collect()
    }

    fn sentence(&mut self, content: &[String]) -> String {
        let mut words: Vec<String> = content.to_vec();
        let fillers = self.range(self.cfg.filler_words);
        for _ in 0..fillers {
            words.push(STOPWORDS.choose(&mut self.rng).unwrap().to_string());
        }
        words.push(COMMON.choose(&mut self.rng).unwrap().to_string());
        words.shuffle(&mut self.rng);
        let mut text = words.join(" ");
        if let Some(first) = text.chars().next() {
            let upper: String = first.to_uppercase().collect();
            text.replace_range(..first.len_utf8(), &upper);
        }
        text.push('.');
        text
    }

    /// The simple-side version of a record's content words.
    fn reworded(&mut self, content: &[String]) -> Vec<String> {
        let mut kept = content.to_vec();
        kept.shuffle(&mut self.rng);
        let drop = self.rng.gen_range(0..=self.cfg.rewording).min(kept.len().saturating_sub(2));
        kept.truncate(kept.len() - drop);
        for _ in 0..drop {
            kept.push(self.content_word());
        }
        kept
    }

    fn unit_vector(&mut self) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..self.cfg.embedding_dim).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }

    fn shape(&mut self) -> PlantedShape {
        let w = self.cfg.shape_weights;
        let roll = self.rng.gen_range(0..w.iter().sum::<u32>());
        if roll < w[0] {
            PlantedShape::OneToOne
        } else if roll < w[0] + w[1] {
            PlantedShape::Split
        } else {
            PlantedShape::Merge
        }
    }

    fn entry(&mut self, d: usize) -> (CorpusEntry, EmbeddingTable, EmbeddingTable) {
        let mut complex: Vec<Vec<String>> = Vec::new();
        let mut simple: Vec<Vec<String>> = Vec::new();
        let (mut cv, mut sv) = (Vec::new(), Vec::new());
        let mut records = Vec::new();
        let (mut ci, mut si) = (0usize, 0usize);
        let paragraphs = self.range(self.cfg.paragraphs);
        for _ in 0..paragraphs {
            let (mut cp, mut sp) = (Vec::new(), Vec::new());
            for _ in 0..self.range(self.cfg.records_per_paragraph) {
                let v = self.unit_vector();
                let shape = self.shape();
                let record = match shape {
                    PlantedShape::OneToOne => {
                        let k = self.content();
                        cp.push(self.sentence(&k));
                        let r = self.reworded(&k);
                        sp.push(self.sentence(&r));
                        SentenceAlignmentRecord::pair(ci, si)
                    }
                    PlantedShape::Split => {
                        let (k1, k2) = (self.content(), self.content());
                        let both: Vec<String> = k1.iter().chain(&k2).cloned().collect();
                        cp.push(self.sentence(&both));
                        let (r1, r2) = (self.reworded(&k1), self.reworded(&k2));
                        sp.push(self.sentence(&r1));
                        sp.push(self.sentence(&r2));
                        SentenceAlignmentRecord::new([ci], [si, si + 1]).unwrap()
                    }
                    PlantedShape::Merge => {
                        let (k1, k2) = (self.content(), self.content());
                        let both: Vec<String> = k1.iter().chain(&k2).cloned().collect();
                        cp.push(self.sentence(&k1));
                        cp.push(self.sentence(&k2));
                        let r = self.reworded(&both);
                        sp.push(self.sentence(&r));
                        SentenceAlignmentRecord::new([ci, ci + 1], [si]).unwrap()
                    }
                };
                let (nc, ns) = record.arity();
                cv.extend(std::iter::repeat(v.clone()).take(nc));
                sv.extend(std::iter::repeat(v).take(ns));
                ci += nc;
                si += ns;
                records.push(record);
            }
            complex.push(cp);
            simple.push(sp);
        }
        let pair = DocumentPair::new(
            format!("planted{d:02}"),
            Document::from_paragraphs(format!("planted{d:02}-c"), complex).unwrap(),
            Document::from_paragraphs(format!("planted{d:02}-s"), simple).unwrap(),
            DomainTag::ALL[d % DomainTag::ALL.len()],
        )
        .unwrap();
        let dim = self.cfg.embedding_dim;
        (
            CorpusEntry { pair, records },
            EmbeddingTable::new(dim, cv).unwrap(),
            EmbeddingTable::new(dim, sv).unwrap(),
        )
    }
}

pub fn planted_corpus(cfg: &PlantedCorpusConfig, seed: u64) -> PlantedCorpus {
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        next_word: 0,
        cfg: cfg.clone(),
    };
    let mut entries = Vec::new();
    let mut embeddings = Vec::new();
    for d in 0..cfg.documents {
        let (entry, c, s) = g.entry(d);
        entries.push(entry);
        embeddings.push((c, s));
    }
    PlantedCorpus {
        corpus: Corpus::new(entries).expect("planted corpus is valid"),
        embeddings,
    }
}

/// Gold and predicted 1:1 records on one document pair with exactly the
/// given confusion counts.
pub fn confusion_records(tp: usize, fp: usize, fn_: usize) -> (Vec<SentenceAlignmentRecord>, Vec<SentenceAlignmentRecord>) {
    let gold: Vec<_> = (0..tp + fn_).map(|k| SentenceAlignmentRecord::pair(k, k)).collect();
    let mut pred: Vec<_> = (0..tp).map(|k| SentenceAlignmentRecord::pair(k, k)).collect();
    pred.extend((0..fp).map(|k| SentenceAlignmentRecord::pair(k, k + 1)));
    (gold, pred)
}

/// A document pair large enough for the records of [`confusion_records`].
pub fn confusion_pair(tp: usize, fp: usize, fn_: usize) -> DocumentPair {
    let n = tp + fp + fn_ + 1;
    let doc = |id: &str| Document::from_paragraphs(id, [(0..n).map(|i| format!("Satz {i}."))]).unwrap();
    DocumentPair::new("table", doc("table-c"), doc("table-s"), DomainTag::Other).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let cfg = PlantedCorpusConfig { documents: 3, ..Default::default() };
        let a = planted_corpus(&cfg, 7);
        let b = planted_corpus(&cfg, 7);
        assert_eq!(a.corpus, b.corpus);
        for (entry, (c, s)) in a.corpus.entries.iter().zip(&a.embeddings) {
            assert_eq!(c.len(), entry.pair.complex.len());
            assert_eq!(s.len(), entry.pair.simple.len());
            let covered_c: usize = entry.records.iter().map(|r| r.complex().len()).sum();
            assert_eq!(covered_c, entry.pair.complex.len());
        }
    }

    #[test]
    fn confusion_counts() {
        let (gold, pred) = confusion_records(3, 2, 1);
        assert_eq!(gold.len(), 4);
        assert_eq!(pred.len(), 5);
        assert!(pred[3..].iter().all(|r| !gold.contains(r)));
    }
}
