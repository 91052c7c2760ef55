//! Corpus data model: documents, document pairs and n:m sentence alignments.

mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub use io::{
    load_corpus, load_manifest, read_alignments, read_document, save_corpus, sidecar_path,
    write_alignments, write_document, write_manifest, ManifestEntry, ALIGNMENT_HEADER,
    MANIFEST_HEADER,
};

/// A `(complex_index, simple_index)` sentence combination.
pub type IndexPair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub text: String,
    pub paragraph_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CefrLevel {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    sentences: Vec<Sentence>,
    pub language_level: Option<CefrLevel>,
    pub source_url: Option<String>,
    /// ISO-8601 date of retrieval.
    pub access_date: Option<String>,
    pub license_tag: String,
    pub title: Option<String>,
    /// Set when the source only served an excerpt of the full text.
    pub preview: bool,
}

impl Document {
    /// Builds a document from already-numbered sentences, checking the ordering invariants.
    pub fn new(doc_id: impl Into<String>, sentences: Vec<Sentence>) -> Result<Self> {
        let doc = Document {
            doc_id: doc_id.into(),
            sentences,
            language_level: None,
            source_url: None,
            access_date: None,
            license_tag: String::new(),
            title: None,
            preview: false,
        };
        doc.validate()?;
        Ok(doc)
    }

    /// Builds a document from paragraphs of sentence strings, numbering
    /// sentences and paragraphs densely from zero. Empty paragraphs are skipped.
    pub fn from_paragraphs<P, S>(doc_id: impl Into<String>, paragraphs: P) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sentences = Vec::new();
        let mut paragraph_index = 0;
        for paragraph in paragraphs {
            let before = sentences.len();
            for text in paragraph {
                sentences.push(Sentence {
                    index: sentences.len(),
                    text: text.into(),
                    paragraph_index,
                });
            }
            if sentences.len() > before {
                paragraph_index += 1;
            }
        }
        Document::new(doc_id, sentences)
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn sentence_text(&self, index: usize) -> Option<&str> {
        self.sentences.get(index).map(|s| s.text.as_str())
    }

    /// Sentences grouped by paragraph, in document order.
    pub fn paragraphs(&self) -> Vec<&[Sentence]> {
        self.sentences
            .chunk_by(|a, b| a.paragraph_index == b.paragraph_index)
            .collect()
    }

    /// Whole text with a space between sentences and a blank line between paragraphs.
    pub fn text(&self) -> String {
        self.paragraphs()
            .iter()
            .map(|p| {
                p.iter()
                    .map(|s| s.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n\n")
    }

    pub fn validate(&self) -> Result<()> {
        validate_id("doc_id", &self.doc_id)?;
        let mut last_paragraph = None;
        for (position, sentence) in self.sentences.iter().enumerate() {
            if sentence.index != position {
                return Err(Error::Validation(format!(
                    "document {}: sentence at position {position} has index {}",
                    self.doc_id, sentence.index
                )));
            }
            if sentence.text.trim().is_empty() {
                return Err(Error::Validation(format!(
                    "document {}: sentence {position} is blank",
                    self.doc_id
                )));
            }
            if sentence.text.contains('\n') {
                return Err(Error::Validation(format!(
                    "document {}: sentence {position} contains a line break",
                    self.doc_id
                )));
            }
            let expected_ok = match last_paragraph {
                None => sentence.paragraph_index == 0,
                Some(last) => {
                    sentence.paragraph_index == last || sentence.paragraph_index == last + 1
                }
            };
            if !expected_ok {
                return Err(Error::Validation(format!(
                    "document {}: sentence {position} jumps to paragraph {}",
                    self.doc_id, sentence.paragraph_index
                )));
            }
            last_paragraph = Some(sentence.paragraph_index);
        }
        Ok(())
    }
}

pub(crate) fn validate_id(what: &str, id: &str) -> Result<()> {
    if id.is_empty()
        || id.chars().any(|c| c.is_control() || c == '/' || c == '\\')
        || id == "."
        || id == ".."
    {
        return Err(Error::Validation(format!("invalid {what} {id:?}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainTag {
    News,
    Bible,
    Fiction,
    Health,
    LanguageLearner,
    Accessibility,
    PublicAuthority,
    Other,
}

impl DomainTag {
    pub const ALL: [DomainTag; 8] = [
        DomainTag::News,
        DomainTag::Bible,
        DomainTag::Fiction,
        DomainTag::Health,
        DomainTag::LanguageLearner,
        DomainTag::Accessibility,
        DomainTag::PublicAuthority,
        DomainTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DomainTag::News => "news",
            DomainTag::Bible => "bible",
            DomainTag::Fiction => "fiction",
            DomainTag::Health => "health",
            DomainTag::LanguageLearner => "language-learner",
            DomainTag::Accessibility => "accessibility",
            DomainTag::PublicAuthority => "public-authority",
            DomainTag::Other => "other",
        }
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DomainTag::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown domain tag {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentPair {
    pub pair_id: String,
    pub complex: Document,
    pub simple: Document,
    pub domain: DomainTag,
}

impl DocumentPair {
    pub fn new(
        pair_id: impl Into<String>,
        complex: Document,
        simple: Document,
        domain: DomainTag,
    ) -> Result<Self> {
        let pair = DocumentPair {
            pair_id: pair_id.into(),
            complex,
            simple,
            domain,
        };
        validate_id("pair_id", &pair.pair_id)?;
        if pair.complex.doc_id == pair.simple.doc_id {
            return Err(Error::Validation(format!(
                "pair {}: complex and simple document share doc_id {}",
                pair.pair_id, pair.complex.doc_id
            )));
        }
        Ok(pair)
    }
}

/// Label an annotator gives to one (complex, simple) sentence combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationLabel {
    Aligned,
    Partial,
    NotAligned,
}

impl AnnotationLabel {
    pub const ALL: [AnnotationLabel; 3] = [
        AnnotationLabel::Aligned,
        AnnotationLabel::Partial,
        AnnotationLabel::NotAligned,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AnnotationLabel::Aligned => "aligned",
            AnnotationLabel::Partial => "partial",
            AnnotationLabel::NotAligned => "not_aligned",
        }
    }
}

impl FromStr for AnnotationLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AnnotationLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown label {s:?}")))
    }
}

impl fmt::Display for AnnotationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignmentType {
    Identical,
    #[serde(rename = "rephrase_1_1")]
    Rephrase,
    #[serde(rename = "split_1_m")]
    Split,
    #[serde(rename = "merge_n_1")]
    Merge,
    #[serde(rename = "fusion_n_m")]
    Fusion,
    #[serde(rename = "deletion_1_0")]
    Deletion,
    #[serde(rename = "addition_0_1")]
    Addition,
}

impl AlignmentType {
    pub const ALL: [AlignmentType; 7] = [
        AlignmentType::Identical,
        AlignmentType::Rephrase,
        AlignmentType::Split,
        AlignmentType::Merge,
        AlignmentType::Fusion,
        AlignmentType::Deletion,
        AlignmentType::Addition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlignmentType::Identical => "identical",
            AlignmentType::Rephrase => "rephrase_1_1",
            AlignmentType::Split => "split_1_m",
            AlignmentType::Merge => "merge_n_1",
            AlignmentType::Fusion => "fusion_n_m",
            AlignmentType::Deletion => "deletion_1_0",
            AlignmentType::Addition => "addition_0_1",
        }
    }
}

impl fmt::Display for AlignmentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One n:m link between complex and simple sentence ordinals.
///
/// Both index sides are kept sorted and free of duplicates. A record with an
/// empty simple side is a deletion, one with an empty complex side an addition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SentenceAlignmentRecord {
    complex: Vec<usize>,
    simple: Vec<usize>,
    pub label: Option<AnnotationLabel>,
}

impl SentenceAlignmentRecord {
    pub fn new(
        complex: impl IntoIterator<Item = usize>,
        simple: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let complex: Vec<usize> = complex
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let simple: Vec<usize> = simple
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if complex.is_empty() && simple.is_empty() {
            return Err(Error::InvalidRecord {
                record: "{}:{}".into(),
                message: "both sides are empty".into(),
            });
        }
        Ok(SentenceAlignmentRecord {
            complex,
            simple,
            label: None,
        })
    }

    /// 1:1 record.
    pub fn pair(complex: usize, simple: usize) -> Self {
        SentenceAlignmentRecord {
            complex: vec![complex],
            simple: vec![simple],
            label: None,
        }
    }

    pub fn with_label(mut self, label: AnnotationLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn complex(&self) -> &[usize] {
        &self.complex
    }

    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.complex.len(), self.simple.len())
    }

    pub fn is_one_to_one(&self) -> bool {
        self.arity() == (1, 1)
    }

    /// True when either side holds more than one sentence.
    pub fn is_n_to_m(&self) -> bool {
        self.complex.len() > 1 || self.simple.len() > 1
    }

    /// Whether the record should count as an alignment. Records the annotator
    /// marked partial or not aligned do not.
    pub fn counts_as_aligned(&self) -> bool {
        matches!(self.label, None | Some(AnnotationLabel::Aligned))
    }

    /// Cartesian product of the two index sets, in lexicographic order.
    pub fn expand_to_pairs(&self) -> Vec<IndexPair> {
        self.complex
            .iter()
            .flat_map(|&c| self.simple.iter().map(move |&s| (c, s)))
            .collect()
    }

    pub fn validate_against(&self, pair: &DocumentPair) -> Result<()> {
        let bad_complex = self.complex.iter().find(|&&i| i >= pair.complex.len());
        let bad_simple = self.simple.iter().find(|&&i| i >= pair.simple.len());
        if let Some(i) = bad_complex {
            return Err(Error::InvalidRecord {
                record: format!("{}/{self}", pair.pair_id),
                message: format!(
                    "complex index {i} out of bounds ({} sentences)",
                    pair.complex.len()
                ),
            });
        }
        if let Some(i) = bad_simple {
            return Err(Error::InvalidRecord {
                record: format!("{}/{self}", pair.pair_id),
                message: format!(
                    "simple index {i} out of bounds ({} sentences)",
                    pair.simple.len()
                ),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SentenceAlignmentRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}:{{{}}}",
            join_indices(&self.complex),
            join_indices(&self.simple)
        )
    }
}

pub(crate) fn join_indices(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn normalized_for_identity(text: &str) -> String {
    text.trim().nfc().collect()
}

/// Assigns the alignment type of a record.
pub fn classify_alignment_type(
    record: &SentenceAlignmentRecord,
    pair: &DocumentPair,
) -> Result<AlignmentType> {
    record.validate_against(pair)?;
    let kind = match record.arity() {
        (0, _) => AlignmentType::Addition,
        (_, 0) => AlignmentType::Deletion,
        (1, 1) => {
            let complex = &pair.complex.sentences()[record.complex[0]].text;
            let simple = &pair.simple.sentences()[record.simple[0]].text;
            if normalized_for_identity(complex) == normalized_for_identity(simple) {
                AlignmentType::Identical
            } else {
                AlignmentType::Rephrase
            }
        }
        (1, _) => AlignmentType::Split,
        (_, 1) => AlignmentType::Merge,
        _ => AlignmentType::Fusion,
    };
    Ok(kind)
}

/// Alignment records keyed by `pair_id`, in file order within each pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlignmentSet {
    records: BTreeMap<String, Vec<SentenceAlignmentRecord>>,
}

impl AlignmentSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a pair with no records yet.
    pub fn ensure_pair(&mut self, pair_id: impl Into<String>) {
        self.records.entry(pair_id.into()).or_default();
    }

    pub fn push(&mut self, pair_id: impl Into<String>, record: SentenceAlignmentRecord) {
        self.records.entry(pair_id.into()).or_default().push(record);
    }

    pub fn insert(&mut self, pair_id: impl Into<String>, records: Vec<SentenceAlignmentRecord>) {
        self.records.insert(pair_id.into(), records);
    }

    pub fn get(&self, pair_id: &str) -> Option<&[SentenceAlignmentRecord]> {
        self.records.get(pair_id).map(Vec::as_slice)
    }

    pub fn contains_pair(&self, pair_id: &str) -> bool {
        self.records.contains_key(pair_id)
    }

    pub fn pair_ids(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[SentenceAlignmentRecord])> {
        self.records.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn record_count(&self) -> usize {
        self.records.values().map(Vec::len).sum()
    }
}

/// Checks that no expanded (complex, simple) combination occurs in two records.
pub fn check_disjoint_records(pair_id: &str, records: &[SentenceAlignmentRecord]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for record in records {
        for p in record.expand_to_pairs() {
            if !seen.insert(p) {
                return Err(Error::InvalidRecord {
                    record: format!("{pair_id}/{record}"),
                    message: format!("combination ({},{}) already aligned", p.0, p.1),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub pair: DocumentPair,
    pub records: Vec<SentenceAlignmentRecord>,
}

impl CorpusEntry {
    /// Texts of every record that has sentences on both sides, with multi-sentence
    /// sides joined by a space.
    pub fn aligned_texts(&self) -> Vec<(String, String)> {
        let join = |doc: &Document, idx: &[usize]| {
            idx.iter()
                .map(|&i| doc.sentences()[i].text.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        self.records
            .iter()
            .filter(|r| r.counts_as_aligned() && !r.complex().is_empty() && !r.simple().is_empty())
            .map(|r| {
                (
                    join(&self.pair.complex, r.complex()),
                    join(&self.pair.simple, r.simple()),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn new(entries: Vec<CorpusEntry>) -> Result<Self> {
        let corpus = Corpus { entries };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for entry in &self.entries {
            if !ids.insert(entry.pair.pair_id.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate pair_id {}",
                    entry.pair.pair_id
                )));
            }
            for record in &entry.records {
                record.validate_against(&entry.pair)?;
            }
            check_disjoint_records(&entry.pair.pair_id, &entry.records)?;
        }
        Ok(())
    }

    pub fn get(&self, pair_id: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.pair.pair_id == pair_id)
    }

    pub fn pairs(&self) -> impl Iterator<Item = &DocumentPair> {
        self.entries.iter().map(|e| &e.pair)
    }

    /// The gold records as an [`AlignmentSet`], listing every pair even when it has no records.
    pub fn alignment_set(&self) -> AlignmentSet {
        let mut set = AlignmentSet::new();
        for entry in &self.entries {
            set.insert(entry.pair.pair_id.clone(), entry.records.clone());
        }
        set
    }

    /// Replaces all records with those of `set`. Pairs missing from `set` end up with none.
    pub fn with_alignments(mut self, set: &AlignmentSet) -> Result<Self> {
        for id in set.pair_ids() {
            if self.get(id).is_none() {
                return Err(Error::Validation(format!(
                    "alignments reference unknown pair_id {id}"
                )));
            }
        }
        for entry in &mut self.entries {
            entry.records = set.get(&entry.pair.pair_id).unwrap_or_default().to_vec();
        }
        self.validate()?;
        Ok(self)
    }
}
