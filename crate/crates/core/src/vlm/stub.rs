use std::collections::VecDeque;
use std::sync::Mutex;

use super::{ApiConfig, ApiError, ChatBackend, PromptBundle};

/// One canned reply of a [`StubBackend`].
#[derive(Debug, Clone)]
pub enum StubReply {
    Text(String),
    /// Reply with the system prompt that was sent.
    Echo,
    Error(ApiError),
}

/// Offline backend for tests and dry runs. Records every prompt it
/// receives.
#[derive(Debug)]
pub struct StubBackend {
    script: Mutex<VecDeque<StubReply>>,
    fallback: StubReply,
    received: Mutex<Vec<PromptBundle>>,
}

impl StubBackend {
    fn new(script: Vec<StubReply>, fallback: StubReply) -> StubBackend {
        StubBackend {
            script: Mutex::new(script.into()),
            fallback,
            received: Mutex::new(Vec::new()),
        }
    }

    pub fn echo() -> StubBackend {
        Self::new(Vec::new(), StubReply::Echo)
    }

    pub fn fixed(text: impl Into<String>) -> StubBackend {
        Self::new(Vec::new(), StubReply::Text(text.into()))
    }

    pub fn failing(error: ApiError) -> StubBackend {
        Self::new(Vec::new(), StubReply::Error(error))
    }

    /// Plays `replies` in order, then echoes.
    pub fn scripted(replies: Vec<StubReply>) -> StubBackend {
        Self::new(replies, StubReply::Echo)
    }

    pub fn calls(&self) -> usize {
        self.received.lock().unwrap().len()
    }

    pub fn prompts(&self) -> Vec<PromptBundle> {
        self.received.lock().unwrap().clone()
    }
}

impl ChatBackend for StubBackend {
    fn complete(&self, prompt: &PromptBundle, _config: &ApiConfig) -> Result<String, ApiError> {
        self.received.lock().unwrap().push(prompt.clone());
        let reply = self
            .script
            .lock()
            .unwrap()
            .pop_front()
            .unwrap_or_else(|| self.fallback.clone());
        match reply {
            StubReply::Text(t) => Ok(t),
            StubReply::Echo => Ok(prompt.system_text.clone()),
            StubReply::Error(e) => Err(e),
        }
    }
}
