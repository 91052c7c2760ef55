//! Harvesting parallel complex/simplified documents from the web.
//!
//! Pages listed in a [`SiteConfig`] are fetched through a [`Transport`],
//! reduced to their main text with CSS selectors, paired by hyperlink, by
//! title or by a manual URL map (tried in that order), and written out as a
//! corpus with a manifest.

mod config;
mod error;
mod extract;
mod fetch;
mod output;
mod pair;
mod run;

pub use config::{load_site_configs, PairingStrategy, Side, SiteConfig, StartUrl};
pub use error::{HarvestError, Result};
pub use extract::{extract_text, normalize_url, Extracted, ExtractedDocument};
pub use fetch::{
    fetch, Clock, FetchRecord, FixedClock, FixtureTransport, HttpTransport, RateLimiter, Response, SystemClock,
    Transport, TransportError, MAX_RETRIES,
};
pub use output::{update_manifest, write_extracted, FETCH_LOG_HEADER, UNPAIRED_HEADER};
pub use pair::{normalize_title, pair_documents, read_manual_map, DocumentLink, PairingOutcome};
pub use run::{FetchLogEntry, HarvestReport, Harvester, HarvestedPair, UnpairedDocument};
