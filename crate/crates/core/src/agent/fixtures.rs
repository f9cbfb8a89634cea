use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::backend::{AgentResponse, Backend, BackendKind};
use super::{AgentRequest, GatewayError};

/// On-disk record of one exchange: `<dir>/<digest>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub digest: String,
    pub request: AgentRequest,
    pub response: RecordedText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedText {
    pub text: String,
}

/// Directory of recorded exchanges keyed by request digest.
#[derive(Debug, Clone)]
pub struct FixtureStore {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl FixtureStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, digest: &str) -> PathBuf {
        self.dir.join(format!("{digest}.json"))
    }

    pub fn load(&self, digest: &str) -> Result<Option<FixtureRecord>, GatewayError> {
        let path = self.path_for(digest);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(GatewayError::Fixture(format!("{}: {e}", path.display()))),
        };
        let record: FixtureRecord =
            serde_json::from_slice(&bytes).map_err(|e| GatewayError::Fixture(format!("{}: {e}", path.display())))?;
        if record.digest != digest || record.request.digest() != digest {
            return Err(GatewayError::Fixture(format!("{}: digest does not match its file name", path.display())));
        }
        Ok(Some(record))
    }

    /// Writes the record through a temporary file and a rename, so readers
    /// never observe a partial file.
    pub fn save(&self, req: &AgentRequest, text: &str) -> Result<PathBuf, GatewayError> {
        let io = |e: std::io::Error| GatewayError::Fixture(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let record = FixtureRecord {
            digest: req.digest().to_string(),
            request: req.clone(),
            response: RecordedText { text: text.to_string() },
        };
        let mut json = serde_json::to_string_pretty(&record).expect("fixture serializes");
        json.push('\n');
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{}.{}.{n}.tmp", req.digest(), std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(json.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        let target = self.path_for(req.digest());
        fs::rename(&tmp, &target).map_err(io)?;
        Ok(target)
    }
}

/// Serves recorded responses; never touches the network.
#[derive(Debug, Clone)]
pub struct ReplayBackend {
    store: FixtureStore,
}

impl ReplayBackend {
    pub fn new(store: FixtureStore) -> Self {
        ReplayBackend { store }
    }
}

impl Backend for ReplayBackend {
    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, GatewayError> {
        match self.store.load(req.digest())? {
            Some(record) => {
                Ok(AgentResponse { text: record.response.text, backend: BackendKind::Replay, latency_ms: None })
            }
            None => Err(GatewayError::MissingFixture { digest: req.digest().to_string() }),
        }
    }
}

/// Forwards to an inner backend and persists every successful exchange.
pub struct RecordBackend {
    inner: Box<dyn Backend>,
    store: FixtureStore,
}

impl RecordBackend {
    pub fn new(inner: Box<dyn Backend>, store: FixtureStore) -> Self {
        RecordBackend { inner, store }
    }
}

impl Backend for RecordBackend {
    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, GatewayError> {
        let response = self.inner.complete(req)?;
        self.store.save(req, &response.text)?;
        Ok(response)
    }
}
