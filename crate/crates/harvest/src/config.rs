use std::collections::HashSet;
use std::path::{Path, PathBuf};

use plainalign_core::corpus::{CefrLevel, DomainTag};
use scraper::Selector;
use serde::{Deserialize, Serialize};

use crate::error::{HarvestError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Complex,
    Simple,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Complex => "complex",
            Side::Simple => "simple",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartUrl {
    pub url: String,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingStrategy {
    LinkReference,
    TitleMatch,
    ManualMap,
}

impl PairingStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            PairingStrategy::LinkReference => "link_reference",
            PairingStrategy::TitleMatch => "title_match",
            PairingStrategy::ManualMap => "manual_map",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(PairingStrategy),
    Many(Vec<PairingStrategy>),
}

fn strategies<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<PairingStrategy>, D::Error> {
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

fn default_rate_limit() -> u64 {
    1000
}

/// How to crawl and pair one website.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteConfig {
    pub site_id: String,
    pub start_urls: Vec<StartUrl>,
    pub content_selector: String,
    #[serde(default)]
    pub remove_selectors: Vec<String>,
    /// Enabled strategies; a single name or a list. Enabled strategies always
    /// run in the order link_reference, title_match, manual_map.
    #[serde(deserialize_with = "strategies")]
    pub pairing_strategy: Vec<PairingStrategy>,
    #[serde(default)]
    pub manual_map_path: Option<PathBuf>,
    #[serde(default = "default_rate_limit")]
    pub rate_limit_ms: u64,
    pub license_tag: String,
    #[serde(default = "default_domain")]
    pub domain_tag: DomainTag,
    #[serde(default)]
    pub complex_level: Option<CefrLevel>,
    #[serde(default)]
    pub simple_level: Option<CefrLevel>,
    /// The site serves excerpts only.
    #[serde(default)]
    pub preview: bool,
    /// Stripped from the end of page titles before title matching.
    #[serde(default)]
    pub title_suffixes: Vec<String>,
}

fn default_domain() -> DomainTag {
    DomainTag::Other
}

pub(crate) fn parse_selector(raw: &str) -> Result<Selector> {
    Selector::parse(raw).map_err(|e| HarvestError::Config(format!("invalid selector {raw:?}: {e}")))
}

impl SiteConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(HarvestError::Config(format!("site {:?}: {m}", self.site_id)));
        if self.site_id.is_empty() || !self.site_id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return err("site_id must be non-empty ASCII letters, digits, '-' or '_'".into());
        }
        if self.content_selector.trim().is_empty() {
            return err("content_selector is empty".into());
        }
        parse_selector(&self.content_selector)?;
        for s in &self.remove_selectors {
            if s.trim().is_empty() {
                return err("remove_selectors contains an empty selector".into());
            }
            parse_selector(s)?;
        }
        if self.rate_limit_ms < 100 {
            return err(format!("rate_limit_ms must be at least 100, got {}", self.rate_limit_ms));
        }
        if self.pairing_strategy.is_empty() {
            return err("pairing_strategy is empty".into());
        }
        if self.pairing_strategy.contains(&PairingStrategy::ManualMap) && self.manual_map_path.is_none() {
            return err("manual_map strategy needs manual_map_path".into());
        }
        let mut seen = HashSet::new();
        for s in &self.start_urls {
            let Some(url) = crate::extract::normalize_url(&s.url) else {
                return err(format!("start url {:?} is not an absolute URL", s.url));
            };
            if !seen.insert(url) {
                return err(format!("start url {:?} listed twice", s.url));
            }
        }
        Ok(())
    }

    pub fn level(&self, side: Side) -> Option<CefrLevel> {
        match side {
            Side::Complex => self.complex_level,
            Side::Simple => self.simple_level,
        }
    }
}

/// Reads a JSON array of site configs. Relative `manual_map_path`s are
/// resolved against the config file's directory.
pub fn load_site_configs(path: &Path) -> Result<Vec<SiteConfig>> {
    let raw = std::fs::read_to_string(path).map_err(|e| HarvestError::io(path, e))?;
    let mut sites: Vec<SiteConfig> = serde_json::from_str(&raw)
        .map_err(|e| HarvestError::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut ids = HashSet::new();
    for site in &mut sites {
        if let Some(p) = &site.manual_map_path {
            if p.is_relative() {
                site.manual_map_path = Some(base.join(p));
            }
        }
        site.validate()?;
        if !ids.insert(site.site_id.clone()) {
            return Err(HarvestError::Config(format!("site_id {:?} used twice", site.site_id)));
        }
    }
    Ok(sites)
}
