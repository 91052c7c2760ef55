use std::path::Path;

use crate::config::{PairingStrategy, SiteConfig};
use crate::error::{HarvestError, Result};
use crate::extract::{normalize_url, ExtractedDocument};

/// A complex/simple pairing by index into the two input lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DocumentLink {
    pub complex: usize,
    pub simple: usize,
    pub method: PairingStrategy,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairingOutcome {
    pub pairs: Vec<DocumentLink>,
    pub unpaired_complex: Vec<usize>,
    pub unpaired_simple: Vec<usize>,
}

/// Lowercased, whitespace-collapsed title with configured site suffixes removed.
pub fn normalize_title(raw: &str, suffixes: &[String]) -> String {
    let mut t = raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    let mut changed = true;
    while changed {
        changed = false;
        for suffix in suffixes {
            let s = suffix.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
            if !s.is_empty() && t.ends_with(&s) {
                t.truncate(t.len() - s.len());
                t = t.trim_end().to_string();
                changed = true;
            }
        }
    }
    t.trim().to_string()
}

/// Reads a manual map: `complex_url<TAB>simple_url` per line; an optional
/// header starting with `complex_url` and `#` comment lines are skipped.
pub fn read_manual_map(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarvestError::io(path, e))?;
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') || (n == 0 && line.starts_with("complex_url")) {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 {
            return Err(HarvestError::Config(format!(
                "{}:{}: expected two tab-separated URLs",
                path.display(),
                n + 1
            )));
        }
        rows.push((cols[0].trim().to_string(), cols[1].trim().to_string()));
    }
    Ok(rows)
}

struct Matcher {
    complex_taken: Vec<bool>,
    simple_taken: Vec<bool>,
    pairs: Vec<DocumentLink>,
}

impl Matcher {
    fn take(&mut self, c: usize, s: usize, method: PairingStrategy) {
        self.complex_taken[c] = true;
        self.simple_taken[s] = true;
        self.pairs.push(DocumentLink { complex: c, simple: s, method });
    }

    /// Greedy in complex order, each complex page taking the first free simple page that fits.
    fn greedy(&mut self, method: PairingStrategy, fits: impl Fn(usize, usize) -> bool) {
        for c in 0..self.complex_taken.len() {
            if self.complex_taken[c] {
                continue;
            }
            if let Some(s) = (0..self.simple_taken.len()).find(|&s| !self.simple_taken[s] && fits(c, s)) {
                self.take(c, s, method);
            }
        }
    }
}

/// Pairs complex with simple documents using the enabled strategies in the
/// fixed order link reference, title match, manual map. Each document ends up
/// in at most one pair.
pub fn pair_documents(
    complex: &[ExtractedDocument],
    simple: &[ExtractedDocument],
    cfg: &SiteConfig,
    manual_map: &[(String, String)],
) -> Result<PairingOutcome> {
    let mut m = Matcher {
        complex_taken: vec![false; complex.len()],
        simple_taken: vec![false; simple.len()],
        pairs: Vec::new(),
    };
    let enabled = |s: PairingStrategy| cfg.pairing_strategy.contains(&s);

    if enabled(PairingStrategy::LinkReference) {
        m.greedy(PairingStrategy::LinkReference, |c, s| {
            complex[c].links.contains(&simple[s].url) || simple[s].links.contains(&complex[c].url)
        });
    }
    if enabled(PairingStrategy::TitleMatch) {
        let title = |d: &ExtractedDocument| {
            d.document
                .title
                .as_deref()
                .map(|t| normalize_title(t, &cfg.title_suffixes))
                .filter(|t| !t.is_empty())
        };
        let ct: Vec<_> = complex.iter().map(title).collect();
        let st: Vec<_> = simple.iter().map(title).collect();
        m.greedy(PairingStrategy::TitleMatch, |c, s| ct[c].is_some() && ct[c] == st[s]);
    }
    if enabled(PairingStrategy::ManualMap) {
        let find = |docs: &[ExtractedDocument], url: &str| {
            let url = normalize_url(url)?;
            docs.iter().position(|d| d.url == url)
        };
        let mut misses = Vec::new();
        let mut resolved = Vec::new();
        for (cu, su) in manual_map {
            match (find(complex, cu), find(simple, su)) {
                (Some(c), Some(s)) => resolved.push((c, s)),
                (c, s) => {
                    if c.is_none() {
                        misses.push(format!("complex {cu}"));
                    }
                    if s.is_none() {
                        misses.push(format!("simple {su}"));
                    }
                }
            }
        }
        if !misses.is_empty() {
            return Err(HarvestError::Pairing {
                site_id: cfg.site_id.clone(),
                message: format!("manual map references unknown URLs: {}", misses.join(", ")),
            });
        }
        for (c, s) in resolved {
            if m.complex_taken[c] || m.simple_taken[s] {
                log::info!("manual map entry {} -> {} skipped: already paired", complex[c].url, simple[s].url);
                continue;
            }
            m.take(c, s, PairingStrategy::ManualMap);
        }
    }
    Ok(PairingOutcome {
        unpaired_complex: (0..complex.len()).filter(|&c| !m.complex_taken[c]).collect(),
        unpaired_simple: (0..simple.len()).filter(|&s| !m.simple_taken[s]).collect(),
        pairs: m.pairs,
    })
}
