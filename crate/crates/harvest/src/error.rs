use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HarvestError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarvestError {
    #[error("site configuration: {0}")]
    Config(String),

    #[error("fetching {url} failed after {attempts} attempt(s): {message}")]
    Fetch {
        url: String,
        attempts: usize,
        message: String,
    },

    #[error("site {site_id}, {url}: {message}")]
    Extract {
        site_id: String,
        url: String,
        message: String,
    },

    #[error("pairing for site {site_id}: {message}")]
    Pairing { site_id: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Corpus(#[from] plainalign_core::Error),
}

impl HarvestError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarvestError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the file system or the network rather than of the data.
    pub fn is_io(&self) -> bool {
        match self {
            HarvestError::Io { .. } | HarvestError::Fetch { .. } => true,
            HarvestError::Corpus(e) => e.is_io(),
            _ => false,
        }
    }
}
