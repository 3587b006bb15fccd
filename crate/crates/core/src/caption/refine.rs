//! Optional caption refinement through a chat-completion endpoint.
//!
//! Any failure (transport, unexpected response shape, or a refined text that
//! drops a point name or annotation value) falls back to the offline caption.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::{CaptionDraft, RequiredTokens};

pub const DEFAULT_INSTRUCTION: &str =
    "Render a clear and concise description of an image about geometric shapes.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefinerConfig {
    /// Off by default; builds stay reproducible without network access.
    pub enabled: bool,
    pub endpoint: Option<String>,
    pub model: String,
    pub timeout_secs: f64,
    pub max_retries: u32,
    pub instruction: String,
    /// Environment variable holding a bearer token, if any.
    pub api_key_env: String,
    /// Cap on concurrent requests during a build.
    pub max_in_flight: usize,
}

impl Default for RefinerConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            endpoint: None,
            model: "gpt-3.5-turbo".to_string(),
            timeout_secs: 30.0,
            max_retries: 2,
            instruction: DEFAULT_INSTRUCTION.to_string(),
            api_key_env: "GEOFIG_API_KEY".to_string(),
            max_in_flight: 4,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RefineError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("unexpected response: {0}")]
    Format(String),
}

pub trait ChatClient: Send + Sync {
    fn complete(&self, instruction: &str, draft: &str) -> Result<String, RefineError>;
}

/// Blocking client for OpenAI-style `/chat/completions` endpoints.
pub struct HttpChatClient {
    agent: ureq::Agent,
    endpoint: String,
    model: String,
    api_key: Option<String>,
}

impl HttpChatClient {
    pub fn new(cfg: &RefinerConfig) -> Option<Self> {
        let endpoint = cfg.endpoint.clone()?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(cfg.timeout_secs.max(0.001))))
            .build()
            .into();
        Some(Self {
            agent,
            endpoint,
            model: cfg.model.clone(),
            api_key: std::env::var(&cfg.api_key_env).ok().filter(|k| !k.is_empty()),
        })
    }

    pub fn request_body(model: &str, instruction: &str, draft: &str) -> Value {
        json!({
            "model": model,
            "messages": [
                {"role": "system", "content": instruction},
                {"role": "user", "content": draft},
            ],
        })
    }
}

/// Pulls the assistant text out of a chat-completion response.
pub fn extract_content(body: &Value) -> Result<String, RefineError> {
    body.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .ok_or_else(|| RefineError::Format("missing choices[0].message.content".into()))
}

impl ChatClient for HttpChatClient {
    fn complete(&self, instruction: &str, draft: &str) -> Result<String, RefineError> {
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(Self::request_body(&self.model, instruction, draft))
            .map_err(|e| RefineError::Transport(e.to_string()))?;
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| RefineError::Transport(e.to_string()))?;
        let body: Value =
            serde_json::from_str(&text).map_err(|e| RefineError::Format(e.to_string()))?;
        extract_content(&body)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaptionMode {
    Offline,
    Refined,
    FallbackTransport,
    FallbackFormat,
    FallbackValidation,
}

impl CaptionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CaptionMode::Offline => "offline",
            CaptionMode::Refined => "refined",
            CaptionMode::FallbackTransport => "fallback:transport",
            CaptionMode::FallbackFormat => "fallback:format",
            CaptionMode::FallbackValidation => "fallback:validation",
        }
    }
}

impl std::str::FromStr for CaptionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            CaptionMode::Offline,
            CaptionMode::Refined,
            CaptionMode::FallbackTransport,
            CaptionMode::FallbackFormat,
            CaptionMode::FallbackValidation,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| format!("unknown caption mode `{s}`"))
    }
}

/// Refines a draft, falling back to its offline join on any failure.
///
/// With no client (offline mode) the offline join is returned unchanged.
pub fn refine(
    draft: &CaptionDraft,
    required: &RequiredTokens,
    client: Option<&dyn ChatClient>,
    cfg: &RefinerConfig,
) -> (String, CaptionMode) {
    let offline = draft.join();
    let Some(client) = client else {
        return (offline, CaptionMode::Offline);
    };
    let mut last = RefineError::Transport("no attempt made".into());
    for attempt in 0..=cfg.max_retries {
        if attempt > 0 {
            std::thread::sleep(Duration::from_millis(100u64 << (attempt - 1).min(6)));
        }
        match client.complete(&cfg.instruction, &offline) {
            Ok(text) => {
                let missing = required.missing_from(&text);
                if missing.is_empty() {
                    return (text, CaptionMode::Refined);
                }
                log::warn!("refined caption dropped {missing:?}; using offline caption");
                return (offline, CaptionMode::FallbackValidation);
            }
            Err(e) => {
                log::debug!("refinement attempt {attempt} failed: {e}");
                last = e;
            }
        }
    }
    log::warn!("caption refinement failed: {last}");
    let mode = match last {
        RefineError::Transport(_) => CaptionMode::FallbackTransport,
        RefineError::Format(_) => CaptionMode::FallbackFormat,
    };
    (offline, mode)
}
