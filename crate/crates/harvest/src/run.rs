use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::time::Duration;

use plainalign_core::corpus::ManifestEntry;

use crate::config::{PairingStrategy, Side, SiteConfig};
use crate::error::Result;
use crate::extract::{extract_text, normalize_url, ExtractedDocument};
use crate::fetch::{fetch, Clock, RateLimiter, Transport};
use crate::output::{update_manifest, write_extracted, write_tsv, FETCH_LOG_HEADER, UNPAIRED_HEADER};
use crate::pair::{pair_documents, read_manual_map};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchLogEntry {
    pub url: String,
    /// `None` when no response arrived.
    pub status: Option<u16>,
    pub access_date: String,
    /// `ok`, `http_status`, `fetch_error` or `extract_error`.
    pub outcome: String,
}

impl FetchLogEntry {
    fn row(&self) -> String {
        let status = self.status.map(|s| s.to_string()).unwrap_or_default();
        format!("{}\t{}\t{}\t{}", self.url, status, self.access_date, self.outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarvestedPair {
    pub site_id: String,
    pub pair_id: String,
    pub method: PairingStrategy,
    pub complex_url: String,
    pub simple_url: String,
    /// Relative to the output directory.
    pub complex_path: String,
    pub simple_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnpairedDocument {
    pub site_id: String,
    pub side: Side,
    pub url: String,
    pub doc_id: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HarvestReport {
    pub pairs: Vec<HarvestedPair>,
    pub unpaired: Vec<UnpairedDocument>,
    pub fetch_log: Vec<FetchLogEntry>,
}

impl HarvestReport {
    /// Pages that produced no response at all.
    pub fn failed_fetches(&self) -> usize {
        self.fetch_log.iter().filter(|e| e.outcome == "fetch_error").count()
    }

    pub fn pairs_by_method(&self, method: PairingStrategy) -> usize {
        self.pairs.iter().filter(|p| p.method == method).count()
    }
}

/// Runs fetch, extraction, pairing and output for a list of sites.
pub struct Harvester<'a> {
    transport: &'a dyn Transport,
    clock: &'a dyn Clock,
    limiter: RateLimiter,
}

struct Job<'c> {
    url: String,
    side: Side,
    doc_id: String,
    cfg: &'c SiteConfig,
}

fn slug(url: &str) -> String {
    let path = url::Url::parse(url).map(|u| u.path().to_string()).unwrap_or_default();
    let last = path.rsplit('/').find(|s| !s.is_empty()).unwrap_or("");
    let stem = last.rsplit_once('.').map_or(last, |(s, _)| s);
    let mut out = String::new();
    for c in stem.to_lowercase().chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    let out = out.trim_matches('-').to_string();
    if out.is_empty() {
        "index".into()
    } else {
        out
    }
}

fn host(url: &str) -> String {
    url::Url::parse(url)
        .ok()
        .and_then(|u| u.host_str().map(str::to_string))
        .unwrap_or_default()
}

/// Unique `<site>-<c|s>-<slug>` ids in start-url order.
fn jobs(cfg: &SiteConfig) -> Vec<Job<'_>> {
    let mut used = HashSet::new();
    cfg.start_urls
        .iter()
        .map(|s| {
            let url = normalize_url(&s.url).unwrap_or_else(|| s.url.clone());
            let tag = match s.side {
                Side::Complex => "c",
                Side::Simple => "s",
            };
            let base = format!("{}-{tag}-{}", cfg.site_id, slug(&url));
            let mut doc_id = base.clone();
            let mut k = 2;
            while !used.insert(doc_id.clone()) {
                doc_id = format!("{base}-{k}");
                k += 1;
            }
            Job { url, side: s.side, doc_id, cfg }
        })
        .collect()
}

impl<'a> Harvester<'a> {
    pub fn new(transport: &'a dyn Transport, clock: &'a dyn Clock) -> Self {
        Harvester { transport, clock, limiter: RateLimiter::new() }
    }

    fn process(&self, job: &Job) -> (FetchLogEntry, Option<ExtractedDocument>) {
        let interval = Duration::from_millis(job.cfg.rate_limit_ms);
        let record = match fetch(&job.url, self.transport, &self.limiter, interval, self.clock) {
            Ok(r) => r,
            Err(e) => {
                log::error!("{e}");
                let entry = FetchLogEntry {
                    url: job.url.clone(),
                    status: None,
                    access_date: self.clock.today(),
                    outcome: "fetch_error".into(),
                };
                return (entry, None);
            }
        };
        let mut entry = FetchLogEntry {
            url: job.url.clone(),
            status: Some(record.status),
            access_date: record.access_date.clone(),
            outcome: "ok".into(),
        };
        if record.status != 200 {
            log::warn!("{}: HTTP {}, page skipped", job.url, record.status);
            entry.outcome = "http_status".into();
            return (entry, None);
        }
        let extracted = extract_text(&record.body, job.cfg, &job.url)
            .and_then(|e| Ok(e.into_document(&job.doc_id)?));
        match extracted {
            Ok((mut document, links)) => {
                document.source_url = Some(job.url.clone());
                document.access_date = Some(record.access_date);
                document.license_tag = job.cfg.license_tag.clone();
                document.language_level = job.cfg.level(job.side);
                document.preview = job.cfg.preview;
                let doc = ExtractedDocument {
                    document,
                    url: job.url.clone(),
                    links,
                    raw_html: record.body,
                    raw_html_path: None,
                };
                (entry, Some(doc))
            }
            Err(e) => {
                log::error!("{e}");
                entry.outcome = "extract_error".into();
                (entry, None)
            }
        }
    }

    /// Fetches one site's pages, one worker per host. Results keep start-url order.
    fn collect<'c>(&self, jobs: &[Job<'c>]) -> Vec<(FetchLogEntry, Option<ExtractedDocument>)> {
        let mut by_host: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, job) in jobs.iter().enumerate() {
            by_host.entry(host(&job.url)).or_default().push(i);
        }
        let mut results: Vec<Option<(FetchLogEntry, Option<ExtractedDocument>)>> = vec![None; jobs.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = by_host
                .into_values()
                .map(|idx| {
                    scope.spawn(move || idx.into_iter().map(|i| (i, self.process(&jobs[i]))).collect::<Vec<_>>())
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("fetch worker panicked") {
                    results[i] = Some(r);
                }
            }
        });
        results.into_iter().map(|r| r.expect("every job ran")).collect()
    }

    fn site(&self, cfg: &SiteConfig, out_dir: &Path, report: &mut HarvestReport) -> Result<Vec<ManifestEntry>> {
        let manual_map = match (&cfg.manual_map_path, cfg.pairing_strategy.contains(&PairingStrategy::ManualMap)) {
            (Some(p), true) => read_manual_map(p)?,
            _ => Vec::new(),
        };
        let jobs = jobs(cfg);
        let (mut complex, mut simple) = (Vec::new(), Vec::new());
        for ((entry, doc), job) in self.collect(&jobs).into_iter().zip(&jobs) {
            report.fetch_log.push(entry);
            if let Some(doc) = doc {
                match job.side {
                    Side::Complex => complex.push(doc),
                    Side::Simple => simple.push(doc),
                }
            }
        }
        let outcome = pair_documents(&complex, &simple, cfg, &manual_map)?;
        let paths = |docs: &mut Vec<ExtractedDocument>| -> Result<Vec<String>> {
            docs.iter_mut().map(|d| write_extracted(out_dir, &cfg.site_id, d)).collect()
        };
        let complex_paths = paths(&mut complex)?;
        let simple_paths = paths(&mut simple)?;
        let prefix = format!("{}-c-", cfg.site_id);
        let mut rows = Vec::new();
        for link in &outcome.pairs {
            let (c, s) = (&complex[link.complex], &simple[link.simple]);
            let slug = c.document.doc_id.strip_prefix(&prefix).unwrap_or(&c.document.doc_id);
            let pair = HarvestedPair {
                site_id: cfg.site_id.clone(),
                pair_id: format!("{}-{slug}", cfg.site_id),
                method: link.method,
                complex_url: c.url.clone(),
                simple_url: s.url.clone(),
                complex_path: complex_paths[link.complex].clone(),
                simple_path: simple_paths[link.simple].clone(),
            };
            rows.push(ManifestEntry {
                pair_id: pair.pair_id.clone(),
                complex_path: pair.complex_path.clone(),
                simple_path: pair.simple_path.clone(),
                domain: cfg.domain_tag,
            });
            report.pairs.push(pair);
        }
        let unpaired = outcome
            .unpaired_complex
            .iter()
            .map(|&i| (Side::Complex, &complex[i]))
            .chain(outcome.unpaired_simple.iter().map(|&i| (Side::Simple, &simple[i])));
        for (side, d) in unpaired {
            report.unpaired.push(UnpairedDocument {
                site_id: cfg.site_id.clone(),
                side,
                url: d.url.clone(),
                doc_id: d.document.doc_id.clone(),
            });
        }
        Ok(rows)
    }

    /// Harvests every site into `out_dir`: documents under `corpus/`, pairs
    /// merged into `manifest.tsv`, leftovers in `unpaired.tsv` and every
    /// request in `fetch_log.tsv`. Pages that fail to fetch or extract are
    /// logged and skipped; a manual map naming unknown URLs aborts the run.
    pub fn run(&self, sites: &[SiteConfig], out_dir: &Path) -> Result<HarvestReport> {
        let mut report = HarvestReport::default();
        let mut rows = Vec::new();
        for cfg in sites {
            cfg.validate()?;
            rows.extend(self.site(cfg, out_dir, &mut report)?);
        }
        update_manifest(&out_dir.join("manifest.tsv"), &rows)?;
        let unpaired: Vec<String> = report
            .unpaired
            .iter()
            .map(|u| format!("{}\t{}\t{}\t{}", u.site_id, u.side.as_str(), u.url, u.doc_id))
            .collect();
        write_tsv(&out_dir.join("unpaired.tsv"), UNPAIRED_HEADER, &unpaired)?;
        let log: Vec<String> = report.fetch_log.iter().map(FetchLogEntry::row).collect();
        write_tsv(&out_dir.join("fetch_log.tsv"), FETCH_LOG_HEADER, &log)?;
        Ok(report)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("https://a.example/texte/Kredit_Zinsen.html"), "kredit-zinsen");
        assert_eq!(slug("https://a.example/"), "index");
        assert_eq!(slug("https://a.example/einfach/kredit/"), "kredit");
    }

    #[test]
    fn colliding_ids_get_suffixes() {
        let cfg: SiteConfig = serde_json::from_str(
            r#"{"site_id": "s", "content_selector": "main", "license_tag": "x", "pairing_strategy": "title_match",
                "start_urls": [{"url": "https://a.example/a/kredit", "side": "complex"},
                               {"url": "https://a.example/b/kredit", "side": "complex"},
                               {"url": "https://a.example/kredit", "side": "simple"}]}"#,
        )
        .unwrap();
        let ids: Vec<_> = jobs(&cfg).into_iter().map(|j| j.doc_id).collect();
        assert_eq!(ids, ["s-c-kredit", "s-c-kredit-2", "s-s-kredit"]);
    }
}
