//! Thresholded alignment over externally computed sentence embeddings.

use std::fmt::Write as _;
use std::path::Path;

use super::{argmax, AlignerConfig};
use crate::corpus::{Document, DocumentPair, SentenceAlignmentRecord};
use crate::error::{Error, Result};

/// One vector per sentence of a document, all of length `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::Config(format!(
                "vector {i} has length {}, expected {dim}",
                v.len()
            )));
        }
        Ok(EmbeddingTable { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, ordinal: usize) -> Option<&[f64]> {
        self.vectors.get(ordinal).map(Vec::as_slice)
    }

    /// Parses the `dim N` / `<ordinal> <f1> ... <fN>` format. `origin` only
    /// labels errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.split('\n').enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(origin, 1, "header", "missing `dim <N>` line"))?;
        let dim = header
            .trim()
            .strip_prefix("dim")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::parse(origin, 1, "header", format!("expected `dim <N>`, got {header:?}")))?;
        let mut slots: Vec<Option<Vec<f64>>> = Vec::new();
        for (k, line) in lines {
            let line_no = k + 1;
            let mut fields = line.split_whitespace();
            let ordinal: usize = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::parse(origin, line_no, "ordinal", format!("{line:?}")))?;
            let values = fields
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(origin, line_no, "value", format!("{f:?} is not a finite number")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != dim {
                return Err(Error::parse(
                    origin,
                    line_no,
                    "value",
                    format!("{} values, expected {dim}", values.len()),
                ));
            }
            if ordinal >= slots.len() {
                slots.resize(ordinal + 1, None);
            }
            if slots[ordinal].replace(values).is_some() {
                return Err(Error::parse(origin, line_no, "ordinal", format!("duplicate ordinal {ordinal}")));
            }
        }
        let vectors = slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::parse(origin, 0, "ordinal", format!("missing vector for sentence {i}"))))
            .collect::<Result<Vec<_>>>()?;
        EmbeddingTable::new(dim, vectors)
    }

    pub fn render(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for (i, v) in self.vectors.iter().enumerate() {
            let _ = write!(out, "{i}");
            for x in v {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    fn check_covers(&self, doc: &Document) -> Result<()> {
        if self.len() != doc.len() {
            return Err(Error::Config(format!(
                "embeddings for {} cover {} sentences, document has {}",
                doc.doc_id,
                self.len(),
                doc.len()
            )));
        }
        Ok(())
    }
}

pub fn read_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    EmbeddingTable::parse(&text, path)
}

pub fn write_embeddings(path: &Path, table: &EmbeddingTable) -> Result<()> {
    std::fs::write(path, table.render()).map_err(|e| Error::io(path, e))
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(-1.0, 1.0)
    }
}

/// For each simple sentence, links the most similar complex sentence when the
/// cosine reaches `embed_threshold`. With `mutual_best` the complex sentence's
/// own best match must be that simple sentence too.
pub fn align_embed_threshold(
    pair: &DocumentPair,
    embeds: (&EmbeddingTable, &EmbeddingTable),
    cfg: &AlignerConfig,
) -> Result<Vec<SentenceAlignmentRecord>> {
    cfg.validate()?;
    let (ce, se) = embeds;
    if ce.dim() != se.dim() {
        return Err(Error::Config(format!(
            "embedding dimensions differ: {} vs {}",
            ce.dim(),
            se.dim()
        )));
    }
    ce.check_covers(&pair.complex)?;
    se.check_covers(&pair.simple)?;
    let (n, m) = (ce.len(), se.len());
    let sim: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..m).map(|j| cosine(&ce.vectors[i], &se.vectors[j])).collect())
        .collect();
    let mut records = Vec::new();
    for j in 0..m {
        let Some((i, s)) = argmax((0..n).map(|i| sim[i][j])) else {
            continue;
        };
        if s <= 0.0 || s < cfg.embed_threshold {
            continue;
        }
        if cfg.mutual_best && argmax(sim[i].iter().copied()).map(|(b, _)| b) != Some(j) {
            continue;
        }
        records.push(SentenceAlignmentRecord::pair(i, j));
    }
    records.sort_by(|a, b| a.complex().cmp(b.complex()).then(a.simple().cmp(b.simple())));
    Ok(records)
}
