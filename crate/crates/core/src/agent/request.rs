use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    pub temperature: f64,
    pub max_output_tokens: u32,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams { temperature: 0.0, max_output_tokens: 8192 }
    }
}

/// One single-shot exchange with the model, addressed by a SHA-256 digest of
/// its template id, rendered prompt and sampling parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StoredRequest")]
pub struct AgentRequest {
    template_id: String,
    params: SamplingParams,
    rendered_prompt: String,
    digest: String,
}

impl AgentRequest {
    pub fn new(template_id: impl Into<String>, rendered_prompt: impl Into<String>, params: SamplingParams) -> Self {
        let template_id = template_id.into();
        let rendered_prompt = rendered_prompt.into();
        let digest = request_digest(&template_id, &rendered_prompt, &params);
        AgentRequest { template_id, params, rendered_prompt, digest }
    }

    pub fn template_id(&self) -> &str {
        &self.template_id
    }

    pub fn rendered_prompt(&self) -> &str {
        &self.rendered_prompt
    }

    pub fn params(&self) -> SamplingParams {
        self.params
    }

    /// 64 lowercase hex characters.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    /// The same request with `extra` appended to the prompt.
    pub fn with_appended(&self, extra: &str) -> AgentRequest {
        AgentRequest::new(self.template_id.clone(), format!("{}{extra}", self.rendered_prompt), self.params)
    }
}

#[derive(Deserialize)]
struct StoredRequest {
    template_id: String,
    params: SamplingParams,
    rendered_prompt: String,
    digest: Option<String>,
}

impl TryFrom<StoredRequest> for AgentRequest {
    type Error = String;

    fn try_from(raw: StoredRequest) -> Result<Self, Self::Error> {
        let req = AgentRequest::new(raw.template_id, raw.rendered_prompt, raw.params);
        match raw.digest {
            Some(d) if d != req.digest => {
                Err(format!("stored digest {d} does not match content digest {}", req.digest))
            }
            _ => Ok(req),
        }
    }
}

/// Fields are joined with the ASCII unit separator after a version tag, so
/// no field boundary can be shifted by the content of another.
pub fn request_digest(template_id: &str, rendered_prompt: &str, params: &SamplingParams) -> String {
    let mut h = Sha256::new();
    for field in [
        "kgforge-agent-request/v1",
        template_id,
        &params.temperature.to_string(),
        &params.max_output_tokens.to_string(),
        rendered_prompt,
    ] {
        h.update(field.as_bytes());
        h.update([0x1f]);
    }
    hex::encode(h.finalize())
}
