use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AgentRequest, GatewayError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackendKind {
    Http,
    Replay,
    Scripted,
}

/// Raw model output; nothing is stripped or rewritten here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentResponse {
    pub text: String,
    pub backend: BackendKind,
    pub latency_ms: Option<u64>,
}

/// Something that can answer an [`AgentRequest`].
pub trait Backend: Send + Sync {
    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, GatewayError>;
}

type Script = dyn Fn(&AgentRequest) -> Result<String, GatewayError> + Send + Sync;

/// A backend driven by a closure. Used to author fixtures and in tests.
pub struct ScriptedBackend {
    script: Box<Script>,
}

impl ScriptedBackend {
    pub fn new(script: impl Fn(&AgentRequest) -> Result<String, GatewayError> + Send + Sync + 'static) -> Self {
        ScriptedBackend { script: Box::new(script) }
    }
}

impl fmt::Debug for ScriptedBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScriptedBackend")
    }
}

impl Backend for ScriptedBackend {
    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, GatewayError> {
        let text = (self.script)(req)?;
        Ok(AgentResponse { text, backend: BackendKind::Scripted, latency_ms: None })
    }
}
