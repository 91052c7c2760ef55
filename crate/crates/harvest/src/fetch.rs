use std::collections::HashMap;
use std::io::Read;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use crate::error::{HarvestError, Result};

/// At most this many repeated attempts after a failed one.
pub const MAX_RETRIES: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub body: Vec<u8>,
}

/// A failure below HTTP: no status code was received.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportError(pub String);

impl std::fmt::Display for TransportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> std::result::Result<Response, TransportError>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        HttpTransport {
            agent: ureq::AgentBuilder::new()
                .timeout(timeout)
                .user_agent(concat!("plainalign/", env!("CARGO_PKG_VERSION")))
                .build(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new(Duration::from_secs(30))
    }
}

fn read_body(resp: ureq::Response) -> std::result::Result<Vec<u8>, TransportError> {
    let mut body = Vec::new();
    resp.into_reader()
        .read_to_end(&mut body)
        .map_err(|e| TransportError(e.to_string()))?;
    Ok(body)
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> std::result::Result<Response, TransportError> {
        match self.agent.get(url).call() {
            Ok(resp) => {
                let status = resp.status();
                Ok(Response { status, body: read_body(resp)? })
            }
            Err(ureq::Error::Status(status, resp)) => Ok(Response { status, body: read_body(resp)? }),
            Err(e) => Err(TransportError(e.to_string())),
        }
    }
}

/// Serves canned responses; unknown URLs fail like an unreachable host.
#[derive(Debug, Default)]
pub struct FixtureTransport {
    pages: HashMap<String, Response>,
    requests: Mutex<Vec<(String, Instant)>>,
}

impl FixtureTransport {
    pub fn new() -> Self {
        FixtureTransport::default()
    }

    pub fn insert(&mut self, url: impl Into<String>, status: u16, body: impl Into<Vec<u8>>) {
        self.pages.insert(url.into(), Response { status, body: body.into() });
    }

    /// Loads `dir/index.tsv` with rows `url<TAB>status<TAB>file`, where
    /// `file` is relative to `dir` and `-` means an empty body.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let index = dir.join("index.tsv");
        let text = std::fs::read_to_string(&index).map_err(|e| HarvestError::io(&index, e))?;
        let mut t = FixtureTransport::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let bad = |m: &str| HarvestError::Config(format!("{}:{}: {m}", index.display(), n + 1));
            if cols.len() != 3 {
                return Err(bad("expected url, status and file"));
            }
            let status: u16 = cols[1].parse().map_err(|_| bad("status is not a number"))?;
            let body = if cols[2] == "-" {
                Vec::new()
            } else {
                let p = dir.join(cols[2]);
                std::fs::read(&p).map_err(|e| HarvestError::io(&p, e))?
            };
            t.insert(cols[0], status, body);
        }
        Ok(t)
    }

    /// Every request so far with the moment it arrived.
    pub fn requests(&self) -> Vec<(String, Instant)> {
        self.requests.lock().unwrap().clone()
    }
}

impl Transport for FixtureTransport {
    fn get(&self, url: &str) -> std::result::Result<Response, TransportError> {
        self.requests.lock().unwrap().push((url.to_string(), Instant::now()));
        self.pages
            .get(url)
            .cloned()
            .ok_or_else(|| TransportError(format!("no fixture for {url}")))
    }
}

pub trait Clock: Send + Sync {
    /// Current date as `YYYY-MM-DD`.
    fn today(&self) -> String;
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn today(&self) -> String {
        chrono::Utc::now().format("%Y-%m-%d").to_string()
    }
}

pub struct FixedClock(pub String);

impl Clock for FixedClock {
    fn today(&self) -> String {
        self.0.clone()
    }
}

/// Serializes requests per host and keeps at least `interval` between the
/// end of one request and the start of the next.
#[derive(Debug, Default)]
pub struct RateLimiter {
    hosts: Mutex<HashMap<String, Arc<Mutex<Option<Instant>>>>>,
}

impl RateLimiter {
    pub fn new() -> Self {
        RateLimiter::default()
    }

    /// Runs `request` once the host is free and its interval has passed.
    pub fn run<T>(&self, host: &str, interval: Duration, request: impl FnOnce() -> T) -> T {
        let slot = self.hosts.lock().unwrap().entry(host.to_string()).or_default().clone();
        let mut last = slot.lock().unwrap();
        if let Some(wait) = last.and_then(|t| (t + interval).checked_duration_since(Instant::now())) {
            std::thread::sleep(wait);
        }
        let out = request();
        *last = Some(Instant::now());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchRecord {
    pub url: String,
    pub status: u16,
    pub body: Vec<u8>,
    pub access_date: String,
    pub attempts: usize,
}

fn host_of(url: &str) -> String {
    url::Url::parse(url)
        .ok()
        .and_then(|u| u.host_str().map(str::to_string))
        .unwrap_or_default()
}

/// Fetches `url`, retrying transport failures at most twice. Any HTTP status
/// is returned as is; callers decide what to do with non-200 pages.
pub fn fetch(
    url: &str,
    transport: &dyn Transport,
    limiter: &RateLimiter,
    interval: Duration,
    clock: &dyn Clock,
) -> Result<FetchRecord> {
    let host = host_of(url);
    let mut last_error = String::new();
    for attempt in 1..=MAX_RETRIES + 1 {
        match limiter.run(&host, interval, || transport.get(url)) {
            Ok(resp) => {
                return Ok(FetchRecord {
                    url: url.to_string(),
                    status: resp.status,
                    body: resp.body,
                    access_date: clock.today(),
                    attempts: attempt,
                })
            }
            Err(e) => {
                log::warn!("{url}: attempt {attempt} failed: {e}");
                last_error = e.0;
            }
        }
    }
    Err(HarvestError::Fetch {
        url: url.to_string(),
        attempts: MAX_RETRIES + 1,
        message: last_error,
    })
}
