//! Closest-simple-sentence alignment over character trigrams.

use std::collections::HashMap;

use super::{argmax, AlignerConfig};
use crate::corpus::{DocumentPair, SentenceAlignmentRecord};
use crate::error::Result;

type Trigram = [char; 3];

fn trigram_counts(text: &str) -> HashMap<Trigram, f64> {
    let chars: Vec<char> = text.to_lowercase().chars().collect();
    let mut counts = HashMap::new();
    for w in chars.windows(3) {
        *counts.entry([w[0], w[1], w[2]]).or_insert(0.0) += 1.0;
    }
    counts
}

fn norm(v: &HashMap<Trigram, f64>) -> f64 {
    v.values().map(|x| x * x).sum::<f64>().sqrt()
}

fn cosine(a: &HashMap<Trigram, f64>, na: f64, b: &HashMap<Trigram, f64>, nb: f64) -> f64 {
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .iter()
        .filter_map(|(g, x)| large.get(g).map(|y| x * y))
        .sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Cosine over character-trigram counts of the lowercased texts, spaces
/// included and no padding. Texts shorter than three characters score 0.
pub fn char_trigram_cosine(a: &str, b: &str) -> f64 {
    let (ga, gb) = (trigram_counts(a), trigram_counts(b));
    cosine(&ga, norm(&ga), &gb, norm(&gb))
}

/// Links every complex sentence to its most similar simple sentence when the
/// similarity reaches `cats_threshold`. Only 1:1 records are produced.
pub fn align_cats_c3g(pair: &DocumentPair, cfg: &AlignerConfig) -> Result<Vec<SentenceAlignmentRecord>> {
    cfg.validate()?;
    let simple: Vec<_> = pair
        .simple
        .sentences()
        .iter()
        .map(|s| {
            let g = trigram_counts(&s.text);
            let n = norm(&g);
            (g, n)
        })
        .collect();
    let mut records = Vec::new();
    for sentence in pair.complex.sentences() {
        let g = trigram_counts(&sentence.text);
        let n = norm(&g);
        let best = argmax(simple.iter().map(|(sg, sn)| cosine(&g, n, sg, *sn)));
        if let Some((j, sim)) = best {
            if sim > 0.0 && sim >= cfg.cats_threshold {
                records.push(SentenceAlignmentRecord::pair(sentence.index, j));
            }
        }
    }
    Ok(records)
}
