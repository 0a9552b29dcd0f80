use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde_json::{json, Value};

use super::{ApiConfig, ApiError, ChatBackend, PromptBundle, Provider, UserPart};

/// Chat-completions client over HTTPS.
#[derive(Debug, Default, Clone, Copy)]
pub struct HttpBackend;

impl HttpBackend {
    pub fn new() -> HttpBackend {
        HttpBackend
    }
}

/// Request body in the chat-completions format.
pub(crate) fn request_body(prompt: &PromptBundle, config: &ApiConfig) -> Value {
    let content: Vec<Value> = prompt
        .user_parts
        .iter()
        .map(|part| match part {
            UserPart::Image { png } => json!({
                "type": "image_url",
                "image_url": {"url": format!("data:image/png;base64,{}", STANDARD.encode(png))},
            }),
            UserPart::Text { text } => json!({"type": "text", "text": text}),
        })
        .collect();
    let mut body = json!({
        "model": config.model_name,
        "max_tokens": prompt.max_tokens,
        "messages": [
            {"role": "system", "content": prompt.system_text},
            {"role": "user", "content": content},
        ],
    });
    if let Some(t) = config.temperature {
        body["temperature"] = json!(t);
    }
    body
}

pub(crate) fn parse_response(status: u16, payload: String) -> Result<String, ApiError> {
    match status {
        200..=299 => {}
        401 | 403 => return Err(ApiError::Auth { status, payload }),
        429 => return Err(ApiError::RateLimit { attempts: 1, payload }),
        408 | 504 => return Err(ApiError::Timeout { payload }),
        _ => return Err(ApiError::Status { status, payload }),
    }
    let parsed: Option<String> = serde_json::from_str::<Value>(&payload).ok().and_then(|v| {
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
    });
    parsed.ok_or(ApiError::MalformedResponse { payload })
}

impl ChatBackend for HttpBackend {
    fn complete(&self, prompt: &PromptBundle, config: &ApiConfig) -> Result<String, ApiError> {
        let key = config.resolved_key().ok_or_else(|| ApiError::Auth {
            status: 0,
            payload: "no API key configured".to_string(),
        })?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let request = agent.post(&config.endpoint_url);
        let request = match config.provider {
            Provider::OpenAi => request.header("Authorization", &format!("Bearer {}", key.expose())),
            Provider::Azure => request.header("api-key", key.expose()),
        };
        let mut response = request.send_json(request_body(prompt, config)).map_err(|e| match e {
            ureq::Error::Timeout(t) => ApiError::Timeout { payload: t.to_string() },
            other => ApiError::Transport(other.to_string()),
        })?;
        let status = response.status().as_u16();
        let payload = response.body_mut().read_to_string().map_err(|e| match e {
            ureq::Error::Timeout(t) => ApiError::Timeout { payload: t.to_string() },
            other => ApiError::MalformedResponse {
                payload: other.to_string(),
            },
        })?;
        parse_response(status, payload)
    }
}
