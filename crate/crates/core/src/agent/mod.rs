//! Prompt templating and model invocation.
//!
//! Every stage builds an [`AgentRequest`] and hands it to a [`Gateway`]. The
//! gateway wraps one [`Backend`]: a live chat-completions client, a replay
//! store of recorded responses, a recorder that does both, or a scripted
//! closure.

mod backend;
mod fixtures;
mod http;
mod request;
mod template;

use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

pub use backend::{AgentResponse, Backend, BackendKind, ScriptedBackend};
pub use fixtures::{FixtureRecord, FixtureStore, RecordBackend, RecordedText, ReplayBackend};
pub use http::{HttpBackend, HttpConfig, SYSTEM_PROMPT};
pub use request::{request_digest, AgentRequest, SamplingParams};
pub use template::{render_prompt, PromptTemplate, Stage, TemplateError, TemplateSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("HTTP error {status}: {body}")]
    Http { status: u16, body: String },
    #[error("no recorded response for request digest {digest}")]
    MissingFixture { digest: String },
    #[error("request timed out after {after:?}")]
    Timeout { after: Duration },
    #[error("fixture store: {0}")]
    Fixture(String),
    #[error("{0}")]
    Script(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BackendConfig {
    Http(HttpConfig),
    Replay { fixtures_dir: PathBuf },
    Record { http: HttpConfig, fixtures_dir: PathBuf },
}

pub struct Gateway {
    backend: Box<dyn Backend>,
    params: SamplingParams,
}

impl std::fmt::Debug for Gateway {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gateway").field("params", &self.params).finish_non_exhaustive()
    }
}

impl Gateway {
    pub fn new(backend: Box<dyn Backend>) -> Self {
        Gateway { backend, params: SamplingParams::default() }
    }

    pub fn from_config(cfg: &BackendConfig) -> Self {
        let backend: Box<dyn Backend> = match cfg {
            BackendConfig::Http(http) => Box::new(HttpBackend::new(http.clone())),
            BackendConfig::Replay { fixtures_dir } => Box::new(ReplayBackend::new(FixtureStore::new(fixtures_dir))),
            BackendConfig::Record { http, fixtures_dir } => {
                Box::new(RecordBackend::new(Box::new(HttpBackend::new(http.clone())), FixtureStore::new(fixtures_dir)))
            }
        };
        Gateway::new(backend)
    }

    pub fn scripted(script: impl Fn(&AgentRequest) -> Result<String, GatewayError> + Send + Sync + 'static) -> Self {
        Gateway::new(Box::new(ScriptedBackend::new(script)))
    }

    pub fn with_params(mut self, params: SamplingParams) -> Self {
        self.params = params;
        self
    }

    pub fn params(&self) -> SamplingParams {
        self.params
    }

    /// Builds a request for `stage` with the gateway's sampling parameters.
    pub fn request(&self, stage: Stage, rendered_prompt: String) -> AgentRequest {
        AgentRequest::new(stage.id(), rendered_prompt, self.params)
    }

    pub fn invoke(&self, req: &AgentRequest) -> Result<AgentResponse, GatewayError> {
        tracing::debug!(template = req.template_id(), digest = req.digest(), "invoking agent");
        self.backend.complete(req)
    }
}
