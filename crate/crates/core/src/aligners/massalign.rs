//! Vicinity-driven paragraph and sentence alignment over TF-IDF similarity.
//!
//! The search walks a monotone path through a similarity matrix. From the
//! current cell it scores every cell up to `vicinity_radius` rows and columns
//! ahead as `similarity * 0.5^(distance - 1)`, where distance is the larger of
//! the two offsets, and moves to the best one. Ties go to the nearer cell and
//! then to the cell closest to the diagonal. When nothing ahead has positive
//! similarity the walk takes a single step. The path itself never looks at
//! the acceptance threshold; thresholds only decide which path cells become
//! links, so raising a threshold can only remove links.
//!
//! Paragraphs are aligned first. Path cells that share a row or column with
//! the previous block grow it, so each block is an n:m group of paragraphs.
//! Sentences are then aligned inside each block; consecutive accepted cells
//! on one row become a 1:n record and on one column an n:1 record.

use std::collections::HashSet;

use super::tfidf::{TermVector, TfIdfModel};
use super::{AlignerConfig, SimilarityMatrix};
use crate::corpus::{Document, DocumentPair, SentenceAlignmentRecord};
use crate::error::Result;

const DISTANCE_DECAY: f64 = 0.5;
const TIE_EPSILON: f64 = 1e-12;

type Cell = (usize, usize);

#[derive(Debug, Clone, Copy)]
struct Candidate {
    cell: Cell,
    score: f64,
    distance: usize,
    skew: usize,
    spread: usize,
    down: usize,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if (self.score - other.score).abs() > TIE_EPSILON {
            return self.score > other.score;
        }
        (self.distance, self.skew, self.spread, self.down)
            < (other.distance, other.skew, other.spread, other.down)
    }
}

/// Best positive cell reachable from `from` (or from just before the
/// top-left corner when `from` is `None`).
fn best_candidate(m: &SimilarityMatrix, from: Option<Cell>, radius: usize) -> Option<Cell> {
    let (base, min_offset, max_offset) = match from {
        Some((i, j)) => ((i as isize, j as isize), 0, radius),
        None => ((-1, -1), 1, radius + 1),
    };
    let mut best: Option<Candidate> = None;
    for da in min_offset..=max_offset {
        for db in min_offset..=max_offset {
            if da == 0 && db == 0 {
                continue;
            }
            let (i, j) = (base.0 + da as isize, base.1 + db as isize);
            if i as usize >= m.rows() || j as usize >= m.cols() {
                continue;
            }
            let (i, j) = (i as usize, j as usize);
            let distance = da.max(db);
            let score = m.get(i, j) * DISTANCE_DECAY.powi(distance as i32 - 1);
            if score <= 0.0 {
                continue;
            }
            let candidate = Candidate {
                cell: (i, j),
                score,
                distance,
                skew: da.abs_diff(db),
                spread: da + db,
                down: da,
            };
            if best.is_none_or(|b| candidate.beats(&b)) {
                best = Some(candidate);
            }
        }
    }
    best.map(|c| c.cell)
}

/// Monotone path through `m`: every step advances the row, the column, or both.
pub fn vicinity_path(m: &SimilarityMatrix, radius: usize) -> Vec<Cell> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let radius = radius.max(1);
    let start = if m.get(0, 0) > 0.0 {
        (0, 0)
    } else {
        best_candidate(m, None, radius).unwrap_or((0, 0))
    };
    let mut path = vec![start];
    let (mut i, mut j) = start;
    loop {
        let next = match best_candidate(m, Some((i, j)), radius) {
            Some(cell) => cell,
            None if i + 1 < m.rows() && j + 1 < m.cols() => (i + 1, j + 1),
            None if i + 1 < m.rows() => (i + 1, j),
            None if j + 1 < m.cols() => (i, j + 1),
            None => break,
        };
        path.push(next);
        (i, j) = next;
    }
    path
}

#[derive(Debug, Clone, Copy)]
struct Block {
    rows: (usize, usize),
    cols: (usize, usize),
}

fn paragraph_blocks(path: &[Cell], m: &SimilarityMatrix) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for &(i, j) in path.iter().filter(|&&(i, j)| m.get(i, j) > 0.0) {
        match blocks.last_mut() {
            Some(b) if i == b.rows.1 || j == b.cols.1 => {
                b.rows.1 = b.rows.1.max(i);
                b.cols.1 = b.cols.1.max(j);
            }
            _ => blocks.push(Block {
                rows: (i, i),
                cols: (j, j),
            }),
        }
    }
    blocks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RunShape {
    Single,
    SameRow,
    SameColumn,
}

/// Groups accepted path cells into 1:1, 1:n and n:1 records.
fn path_runs(path: &[Cell], m: &SimilarityMatrix, threshold: f64) -> Vec<SentenceAlignmentRecord> {
    let mut records = Vec::new();
    let mut run: Vec<Cell> = Vec::new();
    let mut shape = RunShape::Single;
    let flush = |run: &mut Vec<Cell>, shape: RunShape, records: &mut Vec<SentenceAlignmentRecord>| {
        if run.is_empty() {
            return;
        }
        let record = match shape {
            RunShape::Single => SentenceAlignmentRecord::pair(run[0].0, run[0].1),
            RunShape::SameRow => {
                SentenceAlignmentRecord::new([run[0].0], run.iter().map(|c| c.1))
                    .expect("non-empty run")
            }
            RunShape::SameColumn => {
                SentenceAlignmentRecord::new(run.iter().map(|c| c.0), [run[0].1])
                    .expect("non-empty run")
            }
        };
        records.push(record);
        run.clear();
    };
    for &(i, j) in path {
        let sim = m.get(i, j);
        if sim <= 0.0 || sim < threshold {
            flush(&mut run, shape, &mut records);
            shape = RunShape::Single;
            continue;
        }
        if let Some(&(li, lj)) = run.last() {
            let extended = match shape {
                RunShape::Single if i == li => Some(RunShape::SameRow),
                RunShape::Single if j == lj => Some(RunShape::SameColumn),
                RunShape::SameRow if i == li => Some(RunShape::SameRow),
                RunShape::SameColumn if j == lj => Some(RunShape::SameColumn),
                _ => None,
            };
            match extended {
                Some(s) => shape = s,
                None => {
                    flush(&mut run, shape, &mut records);
                    shape = RunShape::Single;
                }
            }
        }
        run.push((i, j));
    }
    flush(&mut run, shape, &mut records);
    records
}

/// Sentence ranges `[start, end)` of each paragraph.
fn paragraph_ranges(doc: &Document) -> Vec<(usize, usize)> {
    let mut start = 0;
    doc.paragraphs()
        .iter()
        .map(|p| {
            let range = (start, start + p.len());
            start += p.len();
            range
        })
        .collect()
}

fn paragraph_vector(model: &TfIdfModel, doc: &Document, range: (usize, usize)) -> TermVector {
    let text = doc.sentences()[range.0..range.1]
        .iter()
        .map(|s| s.text.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    model.vector(&text)
}

pub fn align_massalign(pair: &DocumentPair, cfg: &AlignerConfig) -> Result<Vec<SentenceAlignmentRecord>> {
    cfg.validate()?;
    let (complex, simple) = (&pair.complex, &pair.simple);
    if complex.is_empty() || simple.is_empty() {
        return Ok(Vec::new());
    }
    let stopwords: HashSet<String> = cfg.stopword_list.iter().cloned().collect();
    let model = TfIdfModel::fit(
        complex
            .sentences()
            .iter()
            .chain(simple.sentences())
            .map(|s| s.text.as_str()),
        &stopwords,
    );
    let complex_vectors: Vec<TermVector> =
        complex.sentences().iter().map(|s| model.vector(&s.text)).collect();
    let simple_vectors: Vec<TermVector> =
        simple.sentences().iter().map(|s| model.vector(&s.text)).collect();

    let complex_paragraphs = paragraph_ranges(complex);
    let simple_paragraphs = paragraph_ranges(simple);
    let cp: Vec<TermVector> = complex_paragraphs
        .iter()
        .map(|&r| paragraph_vector(&model, complex, r))
        .collect();
    let sp: Vec<TermVector> = simple_paragraphs
        .iter()
        .map(|&r| paragraph_vector(&model, simple, r))
        .collect();
    let paragraph_matrix = SimilarityMatrix::from_fn(cp.len(), sp.len(), |i, j| cp[i].cosine(&sp[j]));
    let paragraph_path = vicinity_path(&paragraph_matrix, cfg.vicinity_radius);

    let mut records = Vec::new();
    for block in paragraph_blocks(&paragraph_path, &paragraph_matrix) {
        let c0 = complex_paragraphs[block.rows.0].0;
        let c1 = complex_paragraphs[block.rows.1].1;
        let s0 = simple_paragraphs[block.cols.0].0;
        let s1 = simple_paragraphs[block.cols.1].1;
        let matrix = SimilarityMatrix::from_fn(c1 - c0, s1 - s0, |a, b| {
            complex_vectors[c0 + a].cosine(&simple_vectors[s0 + b])
        });
        let path = vicinity_path(&matrix, cfg.vicinity_radius);
        for local in path_runs(&path, &matrix, cfg.merge_threshold) {
            let record = SentenceAlignmentRecord::new(
                local.complex().iter().map(|i| i + c0),
                local.simple().iter().map(|j| j + s0),
            )
            .expect("local record is non-empty");
            records.push(record);
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DomainTag;

    fn matrix(rows: &[&[f64]]) -> SimilarityMatrix {
        SimilarityMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
    }

    fn is_monotone(path: &[Cell]) -> bool {
        path.windows(2).all(|w| {
            let ((a, b), (c, d)) = (w[0], w[1]);
            c >= a && d >= b && (c, d) != (a, b)
        })
    }

    #[test]
    fn path_follows_diagonal() {
        let m = matrix(&[&[0.9, 0.1, 0.0], &[0.1, 0.8, 0.1], &[0.0, 0.2, 0.7]]);
        assert_eq!(vicinity_path(&m, 3), vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn path_takes_split_step() {
        // complex 0 is split into simple 0 and 1
        let m = matrix(&[&[0.7, 0.6, 0.0], &[0.0, 0.1, 0.9]]);
        let path = vicinity_path(&m, 3);
        assert_eq!(path, vec![(0, 0), (0, 1), (1, 2)]);
        let records = path_runs(&path, &m, 0.35);
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].complex(), &[0]);
        assert_eq!(records[0].simple(), &[0, 1]);
    }

    #[test]
    fn path_jumps_over_unrelated_rows() {
        let m = matrix(&[
            &[0.9, 0.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[0.0, 0.8, 0.0],
            &[0.0, 0.0, 0.8],
        ]);
        let path = vicinity_path(&m, 3);
        assert!(path.contains(&(3, 1)) && path.contains(&(4, 2)), "{path:?}");
        assert!(is_monotone(&path));
    }

    #[test]
    fn start_searches_window_when_corner_is_zero() {
        let m = matrix(&[&[0.0, 0.0], &[0.0, 0.0], &[0.5, 0.0], &[0.0, 0.6]]);
        assert_eq!(vicinity_path(&m, 3)[0], (2, 0));
    }

    #[test]
    fn column_run_is_merge() {
        let m = matrix(&[&[0.6, 0.0], &[0.7, 0.1], &[0.0, 0.9]]);
        let path = vicinity_path(&m, 3);
        let records = path_runs(&path, &m, 0.35);
        assert_eq!(records[0].complex(), &[0, 1]);
        assert_eq!(records[0].simple(), &[0]);
    }

    #[test]
    fn threshold_rejects_weak_cells() {
        let m = matrix(&[&[0.9, 0.0], &[0.0, 0.3]]);
        let path = vicinity_path(&m, 3);
        assert_eq!(path_runs(&path, &m, 0.35).len(), 1);
        assert_eq!(path_runs(&path, &m, 0.2).len(), 2);
    }

    #[test]
    fn blocks_merge_on_shared_rows() {
        let m = matrix(&[&[0.5, 0.45, 0.0], &[0.0, 0.4, 0.0], &[0.0, 0.0, 0.6]]);
        let path = vicinity_path(&m, 3);
        let blocks = paragraph_blocks(&path, &m);
        assert_eq!(blocks.len(), 2);
        assert_eq!((blocks[0].rows, blocks[0].cols), ((0, 1), (0, 1)));
    }

    #[test]
    fn self_alignment_is_diagonal() {
        let texts = [
            "Die Stadt baut eine neue Brücke.",
            "Sie kostet viel Geld.",
            "Viele Bürger freuen sich darüber.",
            "Andere Bürger sind dagegen.",
        ];
        let doc = |id| Document::from_paragraphs(id, [texts[..2].iter().copied(), texts[2..].iter().copied()]).unwrap();
        let pair = DocumentPair::new("p", doc("c"), doc("s"), DomainTag::News).unwrap();
        let records = align_massalign(&pair, &AlignerConfig::default()).unwrap();
        let pairs: Vec<_> = records.iter().flat_map(|r| r.expand_to_pairs()).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn empty_document_gives_no_records() {
        let c = Document::from_paragraphs("c", [["Ein Satz."]]).unwrap();
        let s = Document::new("s", vec![]).unwrap();
        let pair = DocumentPair::new("p", c, s, DomainTag::Other).unwrap();
        assert!(align_massalign(&pair, &AlignerConfig::default()).unwrap().is_empty());
    }
}
