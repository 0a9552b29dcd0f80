//! The HTTP backend against a local one-request-per-connection server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use alttext_core::vlm::{
    build_prompt, complete_with_retry, ApiConfig, ApiError, ChatBackend, HttpBackend, PromptRequest, Provider, Secret,
};
use serde_json::{json, Value};

struct Recorded {
    headers: Vec<String>,
    body: Value,
}

/// Serves `replies` in order, one connection each, and returns the
/// endpoint URL plus a channel of recorded requests.
fn serve(replies: Vec<(u16, String)>) -> (String, mpsc::Receiver<Recorded>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for (status, body) in replies {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut headers = Vec::new();
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end().to_string();
                if line.is_empty() {
                    break;
                }
                headers.push(line);
            }
            let length = headers
                .iter()
                .find_map(|h| {
                    h.to_ascii_lowercase()
                        .strip_prefix("content-length:")
                        .map(|v| v.trim().parse::<usize>().unwrap())
                })
                .unwrap_or(0);
            let mut raw = vec![0; length];
            reader.read_exact(&mut raw).unwrap();
            let _ = tx.send(Recorded {
                headers,
                body: serde_json::from_slice(&raw).unwrap_or(Value::Null),
            });
            let mut stream = stream;
            write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
        }
    });
    (url, rx)
}

fn config(url: String, provider: Provider) -> ApiConfig {
    ApiConfig {
        endpoint_url: url,
        api_key: Some(Secret::new("test-key")),
        provider,
        timeout: Duration::from_secs(10),
        backoff: Duration::ZERO,
        ..ApiConfig::default()
    }
}

fn prompt() -> alttext_core::vlm::PromptBundle {
    build_prompt(&PromptRequest::default(), vec![0x89, b'P', b'N', b'G']).unwrap()
}

fn reply(text: &str) -> String {
    json!({"choices": [{"message": {"role": "assistant", "content": text}}]}).to_string()
}

#[test]
fn sends_chat_request_and_reads_reply() {
    let (url, rx) = serve(vec![(200, reply("A line plot."))]);
    let text = HttpBackend::new()
        .complete(&prompt(), &config(url, Provider::OpenAi))
        .unwrap();
    assert_eq!(text, "A line plot.");
    let req = rx.recv().unwrap();
    assert!(req.headers[0].starts_with("POST /v1/chat/completions"));
    assert!(req
        .headers
        .iter()
        .any(|h| h == "authorization: Bearer test-key" || h == "Authorization: Bearer test-key"));
    assert_eq!(req.body["model"], "gpt-4-turbo");
    assert_eq!(req.body["max_tokens"], 225);
    assert!(req.body.get("temperature").is_none());
    let user = req.body["messages"][1]["content"].as_array().unwrap();
    assert_eq!(user.len(), 1);
    assert_eq!(user[0]["image_url"]["url"], "data:image/png;base64,iVBORw==");
}

#[test]
fn azure_uses_api_key_header() {
    let (url, rx) = serve(vec![(200, reply("ok"))]);
    HttpBackend::new()
        .complete(&prompt(), &config(url, Provider::Azure))
        .unwrap();
    let req = rx.recv().unwrap();
    assert!(req.headers.iter().any(|h| h.eq_ignore_ascii_case("api-key: test-key")));
    assert!(!req
        .headers
        .iter()
        .any(|h| h.to_ascii_lowercase().starts_with("authorization")));
}

#[test]
fn status_codes_map_to_errors() {
    let (url, _rx) = serve(vec![
        (401, "{\"error\":\"bad key\"}".into()),
        (500, "oops".into()),
        (200, "{\"choices\": []}".into()),
    ]);
    let cfg = config(url, Provider::OpenAi);
    let backend = HttpBackend::new();
    assert!(matches!(
        backend.complete(&prompt(), &cfg),
        Err(ApiError::Auth { status: 401, .. })
    ));
    assert!(matches!(
        backend.complete(&prompt(), &cfg),
        Err(ApiError::Status { status: 500, .. })
    ));
    assert!(matches!(
        backend.complete(&prompt(), &cfg),
        Err(ApiError::MalformedResponse { .. })
    ));
}

#[test]
fn rate_limit_is_retried_then_succeeds() {
    let (url, rx) = serve(vec![(429, "{}".into()), (429, "{}".into()), (200, reply("third time"))]);
    let text = complete_with_retry(&HttpBackend::new(), &prompt(), &config(url, Provider::OpenAi)).unwrap();
    assert_eq!(text, "third time");
    assert_eq!(rx.iter().take(3).count(), 3);
}
