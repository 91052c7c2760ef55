use std::fmt;
use std::path::{Path, PathBuf};

use plainalign_core::aligners::{
    align_cats_c3g, align_embed_threshold, align_massalign, read_embeddings, AlignerConfig,
};
use plainalign_core::corpus::{load_corpus, read_alignments, write_alignments, AlignmentSet, Corpus};
use plainalign_core::eval::{evaluate_against_corpus, evaluate_alignment_sets};
use plainalign_core::metrics::{corpus_stats, evaluate_outputs, METRIC_HEADER};
use plainalign_core::preprocess::{clean_aligned_pairs, PairCandidate};
use plainalign_harvest::{load_site_configs, Clock, FixedClock, FixtureTransport, Harvester, HttpTransport, SystemClock, Transport};
use rayon::prelude::*;

use crate::{AlignArgs, CleanArgs, Command, EvalAlignArgs, HarvestArgs, Method, MetricsArgs, StatsArgs};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<plainalign_core::Error> for CliError {
    fn from(e: plainalign_core::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<plainalign_harvest::HarvestError> for CliError {
    fn from(e: plainalign_harvest::HarvestError) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn require(paths: &[&Path]) -> Result<()> {
    match paths.iter().find(|p| !p.exists()) {
        Some(p) => Err(CliError::Io(format!("{}: no such file or directory", p.display()))),
        None => Ok(()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(text.lines().map(str::to_string).collect())
}

/// Prints `report` and, when asked, writes it to `out` as well.
fn emit(report: &str, out: Option<&Path>) -> Result<()> {
    print!("{report}");
    match out {
        Some(p) => write_file(p, report),
        None => Ok(()),
    }
}

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Harvest(a) => harvest(a),
        Command::Clean(a) => clean(a).map(|()| 0),
        Command::Align(a) => align(a).map(|()| 0),
        Command::EvalAlign(a) => eval_align(a).map(|()| 0),
        Command::Stats(a) => stats(a).map(|()| 0),
        Command::Metrics(a) => metrics(a).map(|()| 0),
    }
}

fn harvest(a: HarvestArgs) -> Result<u8> {
    require(&[&a.sites])?;
    let sites = load_site_configs(&a.sites)?;
    let transport: Box<dyn Transport> = match &a.fixtures {
        Some(dir) => Box::new(FixtureTransport::from_dir(dir)?),
        None => Box::new(HttpTransport::new(std::time::Duration::from_secs(30))),
    };
    let clock: Box<dyn Clock> = match a.access_date {
        Some(d) => {
            chrono::NaiveDate::parse_from_str(&d, "%Y-%m-%d")
                .map_err(|e| CliError::Validation(format!("--access-date {d:?}: {e}")))?;
            Box::new(FixedClock(d))
        }
        None => Box::new(SystemClock),
    };
    let report = Harvester::new(transport.as_ref(), clock.as_ref()).run(&sites, &a.out)?;
    println!("pair_id\tmethod\tcomplex_url\tsimple_url");
    for p in &report.pairs {
        println!("{}\t{}\t{}\t{}", p.pair_id, p.method.as_str(), p.complex_url, p.simple_url);
    }
    eprintln!(
        "{} pairs, {} unpaired documents, {} failed fetches",
        report.pairs.len(),
        report.unpaired.len(),
        report.failed_fetches()
    );
    Ok(if report.failed_fetches() > 0 { 2 } else { 0 })
}

fn clean(a: CleanArgs) -> Result<()> {
    require(&[&a.manifest, &a.alignments])?;
    let corpus = load_corpus(&a.manifest, Some(&a.alignments))?;
    let mut candidates = Vec::new();
    let mut origin = Vec::new();
    for (e, entry) in corpus.entries.iter().enumerate() {
        let texts = |doc: &plainalign_core::corpus::Document, idx: &[usize]| {
            idx.iter().map(|&i| doc.sentences()[i].text.as_str()).collect::<Vec<_>>().join(" ")
        };
        for (r, record) in entry.records.iter().enumerate() {
            if record.counts_as_aligned() && !record.complex().is_empty() && !record.simple().is_empty() {
                candidates.push(PairCandidate::new(
                    texts(&entry.pair.complex, record.complex()),
                    texts(&entry.pair.simple, record.simple()),
                    entry.pair.pair_id.clone(),
                ));
                origin.push((e, r));
            }
        }
    }
    let (kept, report) = clean_aligned_pairs(&candidates);
    // kept is an ordered subsequence of candidates, and equal candidates share one fate
    let mut survivors = std::collections::HashSet::new();
    let mut next = 0;
    for (i, c) in candidates.iter().enumerate() {
        if next < kept.len() && kept[next] == *c {
            survivors.insert(origin[i]);
            next += 1;
        }
    }
    let origin: std::collections::HashSet<_> = origin.into_iter().collect();
    let mut set = AlignmentSet::new();
    let mut rows = String::from("pair_id\tcomplex\tsimple\n");
    for (e, entry) in corpus.entries.iter().enumerate() {
        set.ensure_pair(entry.pair.pair_id.clone());
        for (r, record) in entry.records.iter().enumerate() {
            if !origin.contains(&(e, r)) || survivors.contains(&(e, r)) {
                set.push(entry.pair.pair_id.clone(), record.clone());
            }
        }
    }
    for c in &kept {
        let clean = |s: &str| s.replace(['\t', '\n'], " ");
        rows.push_str(&format!("{}\t{}\t{}\n", c.origin_doc, clean(&c.complex), clean(&c.simple)));
    }
    write_alignments(&a.out.join("alignments.tsv"), &set)?;
    write_file(&a.out.join("cleaned_pairs.tsv"), &rows)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_file(&a.out.join("cleaning_report.json"), &json)?;
    println!("removed_short\tremoved_near_identical\tremoved_duplicates\tkept");
    println!(
        "{}\t{}\t{}\t{}",
        report.removed_short, report.removed_near_identical, report.removed_duplicates, report.kept
    );
    Ok(())
}

fn embedding_path(dir: &Path, doc_id: &str) -> PathBuf {
    dir.join(format!("{doc_id}.emb"))
}

fn align(a: AlignArgs) -> Result<()> {
    require(&[&a.manifest])?;
    let mut cfg = match &a.config {
        Some(p) => {
            require(&[p])?;
            let raw = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<AlignerConfig>(&raw)
                .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?
        }
        None => AlignerConfig::default(),
    };
    if let Some(t) = a.threshold {
        match a.method {
            Method::Massalign => cfg.merge_threshold = t,
            Method::Cats => cfg.cats_threshold = t,
            Method::Embed => cfg.embed_threshold = t,
        }
    }
    cfg.mutual_best |= a.mutual_best;
    cfg.validate()?;
    let corpus: Corpus = load_corpus(&a.manifest, None)?;
    let embeddings = match a.method {
        Method::Embed => {
            let dir = a
                .embeddings
                .as_deref()
                .ok_or_else(|| CliError::Validation("--method embed needs --embeddings".into()))?;
            require(&[dir])?;
            Some(dir.to_path_buf())
        }
        _ => None,
    };
    let aligned: Vec<_> = corpus
        .entries
        .par_iter()
        .map(|entry| -> Result<_> {
            let pair = &entry.pair;
            let records = match a.method {
                Method::Massalign => align_massalign(pair, &cfg)?,
                Method::Cats => align_cats_c3g(pair, &cfg)?,
                Method::Embed => {
                    let dir = embeddings.as_deref().expect("checked above");
                    let ce = read_embeddings(&embedding_path(dir, &pair.complex.doc_id))?;
                    let se = read_embeddings(&embedding_path(dir, &pair.simple.doc_id))?;
                    align_embed_threshold(pair, (&ce, &se), &cfg)?
                }
            };
            Ok((pair.pair_id.clone(), records))
        })
        .collect();
    let mut set = AlignmentSet::new();
    for result in aligned {
        let (id, records) = result?;
        set.insert(id, records);
    }
    write_alignments(&a.out, &set)?;
    eprintln!("{} records for {} pairs written to {}", set.record_count(), corpus.entries.len(), a.out.display());
    Ok(())
}

fn eval_align(a: EvalAlignArgs) -> Result<()> {
    require(&[&a.gold, &a.pred])?;
    if !(a.beta.is_finite() && a.beta > 0.0) {
        return Err(CliError::Validation(format!("--beta must be positive, got {}", a.beta)));
    }
    let pred = read_alignments(&a.pred)?;
    let report = match &a.manifest {
        Some(m) => {
            require(&[m])?;
            let gold = load_corpus(m, Some(&a.gold))?;
            evaluate_against_corpus(&gold, &pred, a.subset, a.beta, a.exclude_identical)?
        }
        None => evaluate_alignment_sets(&read_alignments(&a.gold)?, &pred, a.subset, a.beta)?,
    };
    let json = a.out.as_deref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    print!("{}", report.to_tsv());
    if let Some(p) = &a.out {
        let body = if json { report.to_json() + "\n" } else { report.to_tsv() };
        write_file(p, &body)?;
    }
    Ok(())
}

fn stats(a: StatsArgs) -> Result<()> {
    require(&[&a.manifest, &a.alignments])?;
    let corpus = load_corpus(&a.manifest, Some(&a.alignments))?;
    emit(&corpus_stats(&corpus)?.to_tsv(), a.out.as_deref())
}

fn as_str(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn metrics(a: MetricsArgs) -> Result<()> {
    require(&[&a.sources, &a.refs])?;
    let sources = read_lines(&a.sources)?;
    let refs = read_lines(&a.refs)?;
    let outputs = match &a.outputs {
        Some(p) => {
            require(&[p])?;
            read_lines(p)?
        }
        None => sources.clone(),
    };
    let system = a.system.unwrap_or_else(|| {
        if a.identity {
            "src2src".into()
        } else {
            a.outputs
                .as_deref()
                .and_then(|p| p.file_stem())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "system".into())
        }
    });
    let report = evaluate_outputs(system, &as_str(&sources), &as_str(&outputs), &as_str(&refs))?;
    emit(&format!("{METRIC_HEADER}\n{}\n", report.tsv_row()), a.out.as_deref())
}
