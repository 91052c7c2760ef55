//! On-disk formats.
//!
//! * Document: UTF-8, one sentence per line, a blank line between paragraphs,
//!   plus a `<stem>.meta.json` sidecar.
//! * Alignments: TSV `pair_id, complex_indices, simple_indices[, label]` with a header.
//! * Manifest: TSV `pair_id, complex_path, simple_path, domain_tag` with a header.
//!   Paths are relative to the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    join_indices, AlignmentSet, AnnotationLabel, CefrLevel, Corpus, CorpusEntry, Document,
    DocumentPair, DomainTag, Sentence, SentenceAlignmentRecord,
};
use crate::error::{Error, Result};

pub const ALIGNMENT_HEADER: &str = "pair_id\tcomplex_indices\tsimple_indices\tlabel";
const ALIGNMENT_HEADER_NO_LABEL: &str = "pair_id\tcomplex_indices\tsimple_indices";
pub const MANIFEST_HEADER: &str = "pair_id\tcomplex_path\tsimple_path\tdomain_tag";

#[derive(Debug, Serialize, Deserialize)]
struct DocumentMeta {
    doc_id: String,
    language_level: Option<CefrLevel>,
    source_url: Option<String>,
    access_date: Option<String>,
    license_tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    preview: bool,
}

/// `dir/name.txt` → `dir/name.meta.json`.
pub fn sidecar_path(text_path: &Path) -> PathBuf {
    let stem = text_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    text_path.with_file_name(format!("{stem}.meta.json"))
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_string(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    body.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(move |_| !text.is_empty())
}

pub(crate) fn parse_document_text(doc_id: &str, text: &str) -> Result<Document> {
    let mut sentences = Vec::new();
    let mut paragraph_index = 0;
    let mut paragraph_has_sentences = false;
    for (_, line) in lines(text) {
        if line.trim().is_empty() {
            if paragraph_has_sentences {
                paragraph_index += 1;
                paragraph_has_sentences = false;
            }
            continue;
        }
        sentences.push(Sentence {
            index: sentences.len(),
            text: line.to_string(),
            paragraph_index,
        });
        paragraph_has_sentences = true;
    }
    Document::new(doc_id, sentences)
}

pub(crate) fn render_document_text(doc: &Document) -> String {
    let mut out = String::new();
    for (i, paragraph) in doc.paragraphs().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for sentence in paragraph.iter() {
            out.push_str(&sentence.text);
            out.push('\n');
        }
    }
    out
}

/// Reads a document file and its sidecar. Without a sidecar the file stem
/// becomes the doc_id and the license tag is left empty.
pub fn read_document(path: &Path) -> Result<Document> {
    let text = read_to_string(path)?;
    let meta_path = sidecar_path(path);
    let meta = if meta_path.exists() {
        let raw = read_to_string(&meta_path)?;
        let meta: DocumentMeta = serde_json::from_str(&raw).map_err(|e| {
            Error::parse(&meta_path, e.line(), "metadata", e.to_string())
        })?;
        Some(meta)
    } else {
        None
    };
    let doc_id = match &meta {
        Some(m) => m.doc_id.clone(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    let mut doc = parse_document_text(&doc_id, &text).map_err(|e| match e {
        Error::Validation(msg) => Error::parse(path, 0, "document", msg),
        other => other,
    })?;
    if let Some(meta) = meta {
        doc.language_level = meta.language_level;
        doc.source_url = meta.source_url;
        doc.access_date = meta.access_date;
        doc.license_tag = meta.license_tag;
        doc.title = meta.title;
        doc.preview = meta.preview;
    }
    Ok(doc)
}

/// Writes `doc` to `path` and its metadata to the sidecar next to it.
pub fn write_document(path: &Path, doc: &Document) -> Result<()> {
    doc.validate()?;
    write_string(path, &render_document_text(doc))?;
    let meta = DocumentMeta {
        doc_id: doc.doc_id.clone(),
        language_level: doc.language_level,
        source_url: doc.source_url.clone(),
        access_date: doc.access_date.clone(),
        license_tag: doc.license_tag.clone(),
        title: doc.title.clone(),
        preview: doc.preview,
    };
    let mut json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    json.push('\n');
    write_string(&sidecar_path(path), &json)
}

fn parse_indices(path: &Path, line: usize, field: &str, raw: &str) -> Result<Vec<usize>> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                Error::parse(path, line, field, format!("{part:?} is not a sentence index"))
            })
        })
        .collect()
}

fn check_tsv_field(what: &str, value: &str) -> Result<()> {
    if value.contains('\t') || value.contains('\n') {
        return Err(Error::Validation(format!(
            "{what} {value:?} contains a tab or line break"
        )));
    }
    Ok(())
}

/// Reads an alignment TSV. An empty file (or one holding only the header) yields an empty set.
pub fn read_alignments(path: &Path) -> Result<AlignmentSet> {
    let text = read_to_string(path)?;
    let mut set = AlignmentSet::new();
    let mut rows = lines(&text);
    match rows.next() {
        None => return Ok(set),
        Some((_, header)) if header == ALIGNMENT_HEADER || header == ALIGNMENT_HEADER_NO_LABEL => {}
        Some((line, header)) => {
            return Err(Error::parse(
                path,
                line,
                "header",
                format!("expected {ALIGNMENT_HEADER:?}, found {header:?}"),
            ))
        }
    }
    for (line, row) in rows {
        if row.is_empty() {
            continue;
        }
        let cols: Vec<&str> = row.split('\t').collect();
        if !(3..=4).contains(&cols.len()) {
            return Err(Error::parse(
                path,
                line,
                "row",
                format!("expected 3 or 4 columns, found {}", cols.len()),
            ));
        }
        if cols[0].is_empty() {
            return Err(Error::parse(path, line, "pair_id", "empty"));
        }
        let complex = parse_indices(path, line, "complex_indices", cols[1])?;
        let simple = parse_indices(path, line, "simple_indices", cols[2])?;
        let mut record = SentenceAlignmentRecord::new(complex, simple)
            .map_err(|e| Error::parse(path, line, "record", e.to_string()))?;
        if let Some(label) = cols.get(3).filter(|l| !l.is_empty()) {
            let label: AnnotationLabel = label
                .parse()
                .map_err(|e: Error| Error::parse(path, line, "label", e.to_string()))?;
            record.label = Some(label);
        }
        set.push(cols[0], record);
    }
    Ok(set)
}

pub fn write_alignments(path: &Path, set: &AlignmentSet) -> Result<()> {
    let mut out = String::from(ALIGNMENT_HEADER);
    out.push('\n');
    for (pair_id, records) in set.iter() {
        check_tsv_field("pair_id", pair_id)?;
        for record in records {
            out.push_str(pair_id);
            out.push('\t');
            out.push_str(&join_indices(record.complex()));
            out.push('\t');
            out.push_str(&join_indices(record.simple()));
            if let Some(label) = record.label {
                out.push('\t');
                out.push_str(label.as_str());
            }
            out.push('\n');
        }
    }
    write_string(path, &out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub pair_id: String,
    /// As written in the manifest.
    pub complex_path: String,
    pub simple_path: String,
    pub domain: DomainTag,
}

impl ManifestEntry {
    pub fn to_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.pair_id, self.complex_path, self.simple_path, self.domain
        )
    }
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = read_to_string(path)?;
    let mut rows = lines(&text);
    match rows.next() {
        Some((_, header)) if header == MANIFEST_HEADER => {}
        Some((line, header)) => {
            return Err(Error::parse(
                path,
                line,
                "header",
                format!("expected {MANIFEST_HEADER:?}, found {header:?}"),
            ))
        }
        None => return Err(Error::parse(path, 1, "header", "manifest is empty")),
    }
    let mut entries = Vec::new();
    for (line, row) in rows {
        if row.is_empty() {
            continue;
        }
        let cols: Vec<&str> = row.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::parse(
                path,
                line,
                "row",
                format!("expected 4 columns, found {}", cols.len()),
            ));
        }
        for (field, value) in ["pair_id", "complex_path", "simple_path"].iter().zip(&cols) {
            if value.is_empty() {
                return Err(Error::parse(path, line, *field, "empty"));
            }
        }
        let domain: DomainTag = cols[3]
            .parse()
            .map_err(|e: Error| Error::parse(path, line, "domain_tag", e.to_string()))?;
        entries.push(ManifestEntry {
            pair_id: cols[0].to_string(),
            complex_path: cols[1].to_string(),
            simple_path: cols[2].to_string(),
            domain,
        });
    }
    Ok(entries)
}

pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<()> {
    let mut out = String::from(MANIFEST_HEADER);
    out.push('\n');
    for entry in entries {
        for (what, value) in [
            ("pair_id", &entry.pair_id),
            ("complex_path", &entry.complex_path),
            ("simple_path", &entry.simple_path),
        ] {
            check_tsv_field(what, value)?;
        }
        out.push_str(&entry.to_row());
        out.push('\n');
    }
    write_string(path, &out)
}

/// Loads every pair listed in the manifest and, when given, the alignment file.
/// Every alignment row must reference a manifest pair and stay in bounds.
pub fn load_corpus(manifest: &Path, alignments: Option<&Path>) -> Result<Corpus> {
    let base = manifest.parent().unwrap_or_else(|| Path::new(""));
    let mut entries = Vec::new();
    for row in load_manifest(manifest)? {
        let complex = read_document(&base.join(&row.complex_path))?;
        let simple = read_document(&base.join(&row.simple_path))?;
        let pair = DocumentPair::new(row.pair_id, complex, simple, row.domain)?;
        entries.push(CorpusEntry {
            pair,
            records: Vec::new(),
        });
    }
    let corpus = Corpus { entries };
    match alignments {
        Some(path) => {
            let set = read_alignments(path)?;
            corpus.with_alignments(&set)
        }
        None => {
            corpus.validate()?;
            Ok(corpus)
        }
    }
}

/// Writes `dir/manifest.tsv`, `dir/alignments.tsv` and `dir/docs/<doc_id>.txt` (+ sidecars).
pub fn save_corpus(dir: &Path, corpus: &Corpus) -> Result<()> {
    corpus.validate()?;
    let mut manifest = Vec::new();
    for entry in &corpus.entries {
        let pair = &entry.pair;
        let complex_rel = format!("docs/{}.txt", pair.complex.doc_id);
        let simple_rel = format!("docs/{}.txt", pair.simple.doc_id);
        write_document(&dir.join(&complex_rel), &pair.complex)?;
        write_document(&dir.join(&simple_rel), &pair.simple)?;
        manifest.push(ManifestEntry {
            pair_id: pair.pair_id.clone(),
            complex_path: complex_rel,
            simple_path: simple_rel,
            domain: pair.domain,
        });
    }
    write_manifest(&dir.join("manifest.tsv"), &manifest)?;
    write_alignments(&dir.join("alignments.tsv"), &corpus.alignment_set())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_text_round_trip() {
        let text = "Erster Satz.\nZweiter Satz.\n\nNeuer Absatz.\n";
        let doc = parse_document_text("d", text).unwrap();
        assert_eq!(doc.len(), 3);
        assert_eq!(doc.sentences()[2].paragraph_index, 1);
        assert_eq!(render_document_text(&doc), text);
    }

    #[test]
    fn repeated_blank_lines_are_one_boundary() {
        let doc = parse_document_text("d", "\n\nA.\n\n\n \nB.\n").unwrap();
        assert_eq!(doc.sentences()[0].paragraph_index, 0);
        assert_eq!(doc.sentences()[1].paragraph_index, 1);
    }

    #[test]
    fn alignment_row_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.tsv");
        fs::write(&path, format!("{ALIGNMENT_HEADER}\ndoc7\t1,2\t4\n")).unwrap();
        let set = read_alignments(&path).unwrap();
        let records = set.get("doc7").unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].complex(), &[1, 2]);
        assert_eq!(records[0].simple(), &[4]);
        assert_eq!(records[0].label, None);
    }

    #[test]
    fn empty_alignment_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.tsv");
        fs::write(&path, "").unwrap();
        assert_eq!(read_alignments(&path).unwrap().record_count(), 0);
        fs::write(&path, format!("{ALIGNMENT_HEADER}\n")).unwrap();
        assert_eq!(read_alignments(&path).unwrap().record_count(), 0);
    }

    #[test]
    fn malformed_row_reports_line_and_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.tsv");
        fs::write(&path, format!("{ALIGNMENT_HEADER}\np\t0\t1\np\t0,x\t2\n")).unwrap();
        let err = read_alignments(&path).unwrap_err();
        match err {
            Error::Parse { line, field, .. } => {
                assert_eq!(line, 3);
                assert_eq!(field, "complex_indices");
            }
            other => panic!("unexpected {other:?}"),
        }
        let msg = read_alignments(&path).unwrap_err().to_string();
        assert!(msg.contains("a.tsv:3"), "{msg}");
    }

    #[test]
    fn bad_label_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.tsv");
        fs::write(&path, format!("{ALIGNMENT_HEADER}\np\t0\t1\tmaybe\n")).unwrap();
        assert!(matches!(
            read_alignments(&path),
            Err(Error::Parse { ref field, .. }) if field == "label"
        ));
        fs::write(&path, "p\t0\t1\n").unwrap();
        assert!(matches!(
            read_alignments(&path),
            Err(Error::Parse { ref field, .. }) if field == "header"
        ));
    }

    #[test]
    fn labels_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.tsv");
        let mut set = AlignmentSet::new();
        set.push("p", SentenceAlignmentRecord::pair(0, 0).with_label(AnnotationLabel::Partial));
        set.push("p", SentenceAlignmentRecord::new([1], []).unwrap());
        write_alignments(&path, &set).unwrap();
        assert_eq!(read_alignments(&path).unwrap(), set);
    }

    #[test]
    fn manifest_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.tsv");
        fs::write(&path, format!("{MANIFEST_HEADER}\np\ta.txt\tb.txt\tsports\n")).unwrap();
        assert!(matches!(
            load_manifest(&path),
            Err(Error::Parse { line: 2, ref field, .. }) if field == "domain_tag"
        ));
    }

    #[test]
    fn unknown_pair_in_alignments() {
        let dir = tempfile::tempdir().unwrap();
        let complex = Document::from_paragraphs("c", [["Eins."]]).unwrap();
        let simple = Document::from_paragraphs("s", [["Zwei."]]).unwrap();
        let corpus = Corpus::new(vec![CorpusEntry {
            pair: DocumentPair::new("p", complex, simple, DomainTag::Health).unwrap(),
            records: vec![],
        }])
        .unwrap();
        save_corpus(dir.path(), &corpus).unwrap();
        let align = dir.path().join("other.tsv");
        fs::write(&align, format!("{ALIGNMENT_HEADER}\nq\t0\t0\n")).unwrap();
        let err = load_corpus(&dir.path().join("manifest.tsv"), Some(&align)).unwrap_err();
        assert!(err.to_string().contains("unknown pair_id q"));
        fs::write(&align, format!("{ALIGNMENT_HEADER}\np\t0\t5\n")).unwrap();
        assert!(matches!(
            load_corpus(&dir.path().join("manifest.tsv"), Some(&align)),
            Err(Error::InvalidRecord { .. })
        ));
    }
}
