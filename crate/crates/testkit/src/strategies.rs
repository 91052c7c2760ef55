use std::collections::BTreeSet;

use plainalign_core::corpus::{Corpus, CorpusEntry, Document, DocumentPair, DomainTag, SentenceAlignmentRecord};
use proptest::prelude::*;

/// Non-blank single-line text mixing ASCII and multibyte characters.
pub fn sentence_text() -> impl Strategy<Value = String> {
    "[A-Za-zÄÖÜäöüß€„“0-9][A-Za-z0-9äöüÄÖÜß€„“ .,!?-]{0,24}"
}

/// Paragraph layout from a list of texts and "starts a new paragraph" flags.
fn build(id: &str, sentences: Vec<(String, bool)>) -> Document {
    let mut paragraphs: Vec<Vec<String>> = vec![Vec::new()];
    for (text, new_paragraph) in sentences {
        if new_paragraph && !paragraphs.last().unwrap().is_empty() {
            paragraphs.push(Vec::new());
        }
        paragraphs.last_mut().unwrap().push(text);
    }
    Document::from_paragraphs(id, paragraphs).unwrap()
}

pub fn document(id: &'static str, max_sentences: usize) -> impl Strategy<Value = Document> {
    prop::collection::vec((sentence_text(), prop::bool::weighted(0.3)), 1..=max_sentences)
        .prop_map(move |s| build(id, s))
}

/// Sentences built from a small shared vocabulary, so that similarities
/// between any two sentences are spread over the whole range.
pub fn pooled_document(id: &'static str, max_sentences: usize) -> impl Strategy<Value = Document> {
    const POOL: &[&str] = &["Haus", "Hund", "Stadt", "Regen", "Brot", "Zug", "Licht", "Wald", "und", "der"];
    let sentence = prop::collection::vec(prop::sample::select(POOL), 1..6).prop_map(|w| w.join(" ") + ".");
    prop::collection::vec((sentence, prop::bool::weighted(0.3)), 1..=max_sentences).prop_map(move |s| build(id, s))
}

/// Documents whose sentences are pairwise distinct: each one carries its own
/// marker word next to random text.
pub fn distinct_document(id: &'static str, max_sentences: usize) -> impl Strategy<Value = Document> {
    prop::collection::vec((sentence_text(), prop::bool::weighted(0.3)), 1..=max_sentences).prop_map(move |s| {
        let marked = s
            .into_iter()
            .enumerate()
            .map(|(i, (text, p))| (format!("Marke{}q {text}", marker(i)), p))
            .collect();
        build(id, marked)
    })
}

fn marker(mut i: usize) -> String {
    let mut out = String::new();
    loop {
        out.push((b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            return out;
        }
    }
}

/// Records over an `n × m` pair with no combination in two records.
pub fn records(n: usize, m: usize) -> impl Strategy<Value = Vec<SentenceAlignmentRecord>> {
    let side = |len: usize| prop::collection::btree_set(0..len.max(1), 0..=len.min(3));
    prop::collection::vec((side(n), side(m)), 0..8).prop_map(move |raw| {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (c, s) in raw {
            let c: Vec<usize> = c.into_iter().filter(|&i| i < n).collect();
            let s: Vec<usize> = s.into_iter().filter(|&i| i < m).collect();
            let Ok(record) = SentenceAlignmentRecord::new(c, s) else {
                continue;
            };
            let pairs = record.expand_to_pairs();
            if pairs.iter().any(|p| seen.contains(p)) || out.contains(&record) {
                continue;
            }
            seen.extend(pairs);
            out.push(record);
        }
        out
    })
}

pub fn corpus_entry(pair_id: String, max_sentences: usize) -> impl Strategy<Value = CorpusEntry> {
    (
        document("c", max_sentences),
        document("s", max_sentences),
        prop::sample::select(DomainTag::ALL.to_vec()),
    )
        .prop_flat_map(move |(mut c, mut s, domain)| {
            c.doc_id = format!("{pair_id}-complex");
            s.doc_id = format!("{pair_id}-simple");
            let (n, m) = (c.len(), s.len());
            let pair = DocumentPair::new(pair_id.clone(), c, s, domain).unwrap();
            records(n, m).prop_map(move |records| CorpusEntry {
                pair: pair.clone(),
                records,
            })
        })
}

pub fn corpus(max_pairs: usize, max_sentences: usize) -> impl Strategy<Value = Corpus> {
    (1..=max_pairs).prop_flat_map(move |k| {
        (0..k)
            .map(|i| corpus_entry(format!("p{i}"), max_sentences))
            .collect::<Vec<_>>()
            .prop_map(|entries| Corpus::new(entries).unwrap())
    })
}
