use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde_json::json;

use super::backend::{AgentResponse, Backend, BackendKind};
use super::{AgentRequest, GatewayError};

pub const SYSTEM_PROMPT: &str =
    "You are a precise knowledge engineering agent. Follow the output format instructions exactly.";

#[derive(Debug, Clone, PartialEq)]
pub struct HttpConfig {
    /// Base of an OpenAI-compatible API, e.g. `https://api.openai.com/v1`.
    pub base_url: String,
    pub model: String,
    pub api_key: String,
    pub timeout: Duration,
    pub retries: u32,
    pub backoff_base: Duration,
    pub max_inflight: usize,
}

impl HttpConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>, api_key: impl Into<String>) -> Self {
        HttpConfig {
            base_url: base_url.into(),
            model: model.into(),
            api_key: api_key.into(),
            timeout: Duration::from_secs(120),
            retries: 3,
            backoff_base: Duration::from_secs(1),
            max_inflight: 4,
        }
    }
}

/// Counting semaphore bounding concurrent requests.
#[derive(Debug)]
struct Limiter {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Limiter {
    fn new(n: usize) -> Self {
        Limiter { free: Mutex::new(n.max(1)), cv: Condvar::new() }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().expect("limiter lock");
        while *free == 0 {
            free = self.cv.wait(free).expect("limiter lock");
        }
        *free -= 1;
        Permit(self)
    }
}

struct Permit<'a>(&'a Limiter);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().expect("limiter lock") += 1;
        self.0.cv.notify_one();
    }
}

/// Chat-completions client with retry and exponential backoff.
#[derive(Debug)]
pub struct HttpBackend {
    cfg: HttpConfig,
    agent: ureq::Agent,
    limiter: Limiter,
}

enum Attempt {
    Done(String),
    Retry(GatewayError),
    Fatal(GatewayError),
}

impl HttpBackend {
    pub fn new(cfg: HttpConfig) -> Self {
        let agent =
            ureq::Agent::config_builder().timeout_global(Some(cfg.timeout)).http_status_as_error(false).build().into();
        let limiter = Limiter::new(cfg.max_inflight);
        HttpBackend { cfg, agent, limiter }
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'))
    }

    /// The JSON body sent for a request; identical on every retry.
    pub fn request_body(&self, req: &AgentRequest) -> serde_json::Value {
        json!({
            "model": self.cfg.model,
            "messages": [
                {"role": "system", "content": SYSTEM_PROMPT},
                {"role": "user", "content": req.rendered_prompt()},
            ],
            "temperature": req.params().temperature,
            "max_tokens": req.params().max_output_tokens,
        })
    }

    fn attempt(&self, body: &str) -> Attempt {
        let result = self
            .agent
            .post(&self.endpoint())
            .header("Authorization", &format!("Bearer {}", self.cfg.api_key))
            .header("Content-Type", "application/json")
            .send(body);
        let mut response = match result {
            Ok(r) => r,
            Err(ureq::Error::Timeout(_)) => return Attempt::Fatal(GatewayError::Timeout { after: self.cfg.timeout }),
            Err(e) => return Attempt::Retry(GatewayError::Http { status: 0, body: e.to_string() }),
        };
        let status = response.status().as_u16();
        let text = match response.body_mut().read_to_string() {
            Ok(t) => t,
            Err(ureq::Error::Timeout(_)) => return Attempt::Fatal(GatewayError::Timeout { after: self.cfg.timeout }),
            Err(e) => return Attempt::Retry(GatewayError::Http { status, body: e.to_string() }),
        };
        if status == 429 || status >= 500 {
            return Attempt::Retry(GatewayError::Http { status, body: text });
        }
        if !(200..300).contains(&status) {
            return Attempt::Fatal(GatewayError::Http { status, body: text });
        }
        match extract_content(&text) {
            Some(content) => Attempt::Done(content),
            None => Attempt::Fatal(GatewayError::Http { status, body: format!("unexpected response shape: {text}") }),
        }
    }
}

fn extract_content(body: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(body).ok()?;
    v.get("choices")?.get(0)?.get("message")?.get("content")?.as_str().map(str::to_string)
}

impl Backend for HttpBackend {
    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, GatewayError> {
        let body = self.request_body(req).to_string();
        let _permit = self.limiter.acquire();
        let started = Instant::now();
        let mut attempt = 0;
        loop {
            match self.attempt(&body) {
                Attempt::Done(text) => {
                    return Ok(AgentResponse {
                        text,
                        backend: BackendKind::Http,
                        latency_ms: Some(started.elapsed().as_millis() as u64),
                    })
                }
                Attempt::Fatal(e) => return Err(e),
                Attempt::Retry(e) if attempt >= self.cfg.retries => return Err(e),
                Attempt::Retry(e) => {
                    let delay = self.cfg.backoff_base * 2u32.saturating_pow(attempt);
                    tracing::warn!(error = %e, attempt = attempt + 1, ?delay, "retrying chat completion");
                    std::thread::sleep(delay);
                    attempt += 1;
                }
            }
        }
    }
}
