//! Vision-language model descriptions: prompt construction and transport.

mod http;
mod prompt;
mod stub;

use std::fmt;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

pub use http::HttpBackend;
pub use prompt::{build_prompt, system_text, Augmentation, PromptBundle, PromptRequest, UserPart, DEFAULT_MAX_TOKENS};
pub use stub::{StubBackend, StubReply};

use crate::error::{AltTextError, Result};
use crate::figure::FigureFacts;
use crate::heuristic::{generate_alt_text, AltText, DescriptionOptions};

pub const API_KEY_ENV: &str = "ALT_API_KEY";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ApiError {
    #[error("authentication rejected (status {status}): {payload}")]
    Auth { status: u16, payload: String },

    #[error("rate limited after {attempts} attempts: {payload}")]
    RateLimit { attempts: u32, payload: String },

    #[error("request timed out: {payload}")]
    Timeout { payload: String },

    #[error("malformed response: {payload}")]
    MalformedResponse { payload: String },

    #[error("request failed with status {status}: {payload}")]
    Status { status: u16, payload: String },

    #[error("transport error: {0}")]
    Transport(String),
}

/// A credential that never appears in `Debug` output or serialized data.
#[derive(Clone, PartialEq, Eq)]
pub struct Secret(String);

impl Secret {
    pub fn new(value: impl Into<String>) -> Secret {
        Secret(value.into())
    }

    pub fn expose(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Secret(***)")
    }
}

/// Request/response shape of the remote endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provider {
    /// Bearer-token chat completions (OpenAI and compatible servers).
    OpenAi,
    /// Azure deployments, authenticated with an `api-key` header.
    Azure,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApiConfig {
    pub endpoint_url: String,
    #[serde(skip)]
    pub api_key: Option<Secret>,
    pub model_name: String,
    pub provider: Provider,
    pub timeout: Duration,
    pub max_retries: u32,
    /// Omitted from requests when unset so the provider default applies.
    pub temperature: Option<f64>,
    /// Delay before the first retry; doubled on every further attempt.
    pub backoff: Duration,
}

impl Default for ApiConfig {
    fn default() -> Self {
        ApiConfig {
            endpoint_url: "https://api.openai.com/v1/chat/completions".to_string(),
            api_key: None,
            model_name: "gpt-4-turbo".to_string(),
            provider: Provider::OpenAi,
            timeout: Duration::from_secs(60),
            max_retries: 3,
            temperature: None,
            backoff: Duration::from_secs(1),
        }
    }
}

impl ApiConfig {
    /// The configured key, else the `ALT_API_KEY` environment variable.
    pub fn resolved_key(&self) -> Option<Secret> {
        self.api_key
            .clone()
            .or_else(|| std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()).map(Secret))
    }
}

/// Anything that can turn a prompt into model text.
pub trait ChatBackend: Send + Sync {
    /// One attempt, without retries.
    fn complete(&self, prompt: &PromptBundle, config: &ApiConfig) -> std::result::Result<String, ApiError>;
}

/// Sends `prompt`, retrying rate-limited attempts with exponential backoff
/// at most `config.max_retries` times.
pub fn complete_with_retry(
    backend: &dyn ChatBackend,
    prompt: &PromptBundle,
    config: &ApiConfig,
) -> std::result::Result<String, ApiError> {
    let mut attempt = 0;
    loop {
        match backend.complete(prompt, config) {
            Err(ApiError::RateLimit { payload, .. }) => {
                if attempt >= config.max_retries {
                    return Err(ApiError::RateLimit {
                        attempts: attempt + 1,
                        payload,
                    });
                }
                let delay = config.backoff.saturating_mul(1 << attempt.min(16));
                log::warn!("rate limited, retrying in {delay:?}");
                std::thread::sleep(delay);
                attempt += 1;
            }
            other => return other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiOptions {
    /// Semantic level, 1 to 4.
    pub desc_level: u8,
    pub augmentation: Augmentation,
    pub max_tokens: u32,
    pub include_visual_attrs: bool,
    /// Settings for the heuristic text and table used as augmentation.
    pub heuristic: DescriptionOptions,
}

impl Default for ApiOptions {
    fn default() -> Self {
        ApiOptions {
            desc_level: 2,
            augmentation: Augmentation::None,
            max_tokens: DEFAULT_MAX_TOKENS,
            include_visual_attrs: true,
            heuristic: DescriptionOptions::default(),
        }
    }
}

/// Builds the prompt for `figure`, including any requested augmentation.
pub fn prompt_for_figure(figure: &FigureFacts, options: &ApiOptions) -> Result<(PromptBundle, Vec<String>)> {
    if !(1..=4).contains(&options.desc_level) {
        return Err(AltTextError::InvalidLevel(options.desc_level));
    }
    let png = figure.image_bytes.clone().ok_or(AltTextError::MissingImage)?;
    let mut warnings = Vec::new();
    let mut augmentation = options.augmentation;
    let heuristic = if augmentation == Augmentation::None {
        None
    } else {
        let heuristic_options = DescriptionOptions {
            desc_level: options.desc_level.min(3),
            include_table: augmentation.uses_table(),
            ..options.heuristic.clone()
        };
        Some(generate_alt_text(figure, &heuristic_options)?)
    };
    let table = heuristic.as_ref().and_then(|h| h.table_markdown.clone());
    if augmentation.uses_table() && table.is_none() {
        warnings.push("figure has no tabular data; prompting without a table".to_string());
        augmentation = if augmentation.uses_heuristic() {
            Augmentation::Heuristic
        } else {
            Augmentation::None
        };
    }
    let request = PromptRequest {
        desc_level: options.desc_level,
        max_tokens: options.max_tokens,
        augmentation,
        heuristic_text: heuristic.as_ref().map(|h| h.text.as_str()),
        table_markdown: table.as_deref(),
        include_visual_attrs: options.include_visual_attrs,
    };
    Ok((build_prompt(&request, png)?, warnings))
}

/// Describes `figure` with a vision-language model. The response is used
/// verbatim.
pub fn generate_api_alt_text(
    figure: &FigureFacts,
    options: &ApiOptions,
    backend: &dyn ChatBackend,
    config: &ApiConfig,
) -> Result<AltText> {
    let (prompt, warnings) = prompt_for_figure(figure, options)?;
    let text = complete_with_retry(backend, &prompt, config)?;
    let mut alt = AltText::plain(text, options.desc_level);
    alt.warnings = warnings;
    Ok(alt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secret_is_redacted() {
        let config = ApiConfig {
            api_key: Some(Secret::new("sk-live-123")),
            ..ApiConfig::default()
        };
        assert!(!format!("{config:?}").contains("sk-live-123"));
        assert!(!serde_json::to_string(&config).unwrap().contains("sk-live-123"));
    }

    #[test]
    fn retries_are_bounded() {
        let stub = StubBackend::scripted(vec![
            StubReply::Error(ApiError::RateLimit {
                attempts: 1,
                payload: "slow down".into()
            });
            10
        ]);
        let config = ApiConfig {
            max_retries: 2,
            backoff: Duration::ZERO,
            ..ApiConfig::default()
        };
        let prompt = build_prompt(&PromptRequest::default(), vec![0]).unwrap();
        let err = complete_with_retry(&stub, &prompt, &config).unwrap_err();
        assert_eq!(stub.calls(), 3);
        assert!(matches!(err, ApiError::RateLimit { attempts: 3, .. }));
    }

    #[test]
    fn retry_then_success() {
        let stub = StubBackend::scripted(vec![
            StubReply::Error(ApiError::RateLimit {
                attempts: 1,
                payload: String::new(),
            }),
            StubReply::Text("a line chart.".into()),
        ]);
        let config = ApiConfig {
            backoff: Duration::ZERO,
            ..ApiConfig::default()
        };
        let prompt = build_prompt(&PromptRequest::default(), vec![0]).unwrap();
        assert_eq!(complete_with_retry(&stub, &prompt, &config).unwrap(), "a line chart.");
        assert_eq!(stub.calls(), 2);
    }
}
