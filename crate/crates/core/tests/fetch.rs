use std::cell::RefCell;
use std::collections::VecDeque;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use unbox_core::corpus::{
    fetch_comments, DumpSource, FetchConfig, FetchError, Fetcher, HttpResponse, HttpTransport, TransportError,
};

const PAGE1: &str = include_str!("fixtures/threads_page1.json");
const PAGE2: &str = include_str!("fixtures/threads_page2.json");

/// Replays canned responses in order and records every request.
struct Recorded {
    responses: RefCell<VecDeque<(u16, String)>>,
    requests: RefCell<Vec<Vec<(String, String)>>>,
}

impl Recorded {
    fn new(responses: Vec<(u16, &str)>) -> Self {
        Recorded {
            responses: RefCell::new(responses.into_iter().map(|(s, b)| (s, b.to_string())).collect()),
            requests: RefCell::new(Vec::new()),
        }
    }

    fn param(&self, request: usize, key: &str) -> Option<String> {
        self.requests.borrow()[request]
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
    }
}

impl HttpTransport for &Recorded {
    fn get(&self, _url: &str, query: &[(&str, String)]) -> Result<HttpResponse, TransportError> {
        self.requests
            .borrow_mut()
            .push(query.iter().map(|(k, v)| (k.to_string(), v.clone())).collect());
        let (status, body) = self
            .responses
            .borrow_mut()
            .pop_front()
            .ok_or_else(|| TransportError("no more recorded responses".into()))?;
        Ok(HttpResponse { status, body })
    }
}

fn config() -> FetchConfig {
    FetchConfig {
        base_url: "http://fixture.invalid/commentThreads".into(),
        ..FetchConfig::new("test-key")
    }
}

#[test]
fn two_pages_give_two_hundred_comments() {
    let transport = Recorded::new(vec![(200, PAGE1), (200, PAGE2)]);
    let dump = fetch_comments(&transport, config(), "vid123", 2).unwrap();
    assert_eq!(dump.len(), 200);
    assert_eq!(dump.source, DumpSource::ApiFetch);
    assert_eq!(dump.video_id.as_deref(), Some("vid123"));
    assert_eq!(dump.comments.iter().filter(|c| c.is_reply).count(), 10);

    // replies come right after their thread, and page order is preserved
    let ids: Vec<&str> = dump.comments.iter().take(11).map(|c| c.id.as_str()).collect();
    assert_eq!(&ids[8..11], ["t008", "t008.r1", "t009"]);
    assert_eq!(dump.comments[199].id, "t189");

    assert_eq!(transport.requests.borrow().len(), 2);
    assert_eq!(transport.param(0, "videoId").as_deref(), Some("vid123"));
    assert_eq!(transport.param(0, "key").as_deref(), Some("test-key"));
    assert_eq!(transport.param(0, "maxResults").as_deref(), Some("100"));
    assert_eq!(transport.param(0, "pageToken"), None);
    assert_eq!(transport.param(1, "pageToken").as_deref(), Some("PAGE2"));
}

#[test]
fn page_limit_stops_early() {
    let transport = Recorded::new(vec![(200, PAGE1), (200, PAGE2)]);
    let dump = fetch_comments(&transport, config(), "vid123", 1).unwrap();
    assert_eq!(dump.len(), 100);
    assert_eq!(transport.requests.borrow().len(), 1);
}

#[test]
fn zero_page_limit_makes_no_call() {
    let transport = Recorded::new(vec![]);
    let dump = fetch_comments(&transport, config(), "vid123", 0).unwrap();
    assert!(dump.is_empty());
    assert!(transport.requests.borrow().is_empty());
}

#[test]
fn forbidden_is_an_auth_error() {
    let transport = Recorded::new(vec![(403, r#"{"error":{"code":403}}"#)]);
    let err = fetch_comments(&transport, config(), "vid123", 2).unwrap_err();
    assert!(matches!(err, FetchError::Auth { status: 403 }));
}

#[test]
fn unknown_video_is_not_found() {
    let transport = Recorded::new(vec![(404, "{}")]);
    let err = fetch_comments(&transport, config(), "nope", 1).unwrap_err();
    assert!(matches!(err, FetchError::NotFound(ref v) if v == "nope"));
}

#[test]
fn empty_credentials_rejected() {
    let transport = Recorded::new(vec![(200, PAGE2)]);
    let err = fetch_comments(&transport, FetchConfig::new(""), "vid123", 1).unwrap_err();
    assert!(matches!(err, FetchError::MissingCredentials));
}

fn recording_sleeper() -> (Arc<Mutex<Vec<Duration>>>, impl Fn(Duration) + Send + Sync + 'static) {
    let slept = Arc::new(Mutex::new(Vec::new()));
    let sink = Arc::clone(&slept);
    (slept, move |d| sink.lock().unwrap().push(d))
}

#[test]
fn rate_limit_retries_with_backoff_then_succeeds() {
    let transport = Recorded::new(vec![(429, ""), (503, ""), (200, PAGE2)]);
    let (slept, sleeper) = recording_sleeper();
    let dump = Fetcher::new(&transport, config())
        .with_sleeper(sleeper)
        .fetch("vid123", 1)
        .unwrap();
    assert_eq!(dump.len(), 100);
    assert_eq!(*slept.lock().unwrap(), [Duration::from_millis(500), Duration::from_millis(1000)]);
}

#[test]
fn rate_limit_gives_up_after_three_retries() {
    let transport = Recorded::new(vec![(429, ""); 5]);
    let (slept, sleeper) = recording_sleeper();
    let err = Fetcher::new(&transport, config())
        .with_sleeper(sleeper)
        .fetch("vid123", 1)
        .unwrap_err();
    assert!(matches!(err, FetchError::RateLimited { attempts: 4, status: 429 }));
    assert_eq!(slept.lock().unwrap().len(), 3);
    assert_eq!(transport.requests.borrow().len(), 4);
}

#[test]
fn garbage_body_is_a_decode_error() {
    let transport = Recorded::new(vec![(200, "<html>")]);
    let err = fetch_comments(&transport, config(), "vid123", 1).unwrap_err();
    assert!(matches!(err, FetchError::Decode(_)));
}

#[test]
fn replaying_the_same_transcript_is_deterministic() {
    let a = fetch_comments(&Recorded::new(vec![(200, PAGE1), (200, PAGE2)]), config(), "vid123", 5).unwrap();
    let b = fetch_comments(&Recorded::new(vec![(200, PAGE1), (200, PAGE2)]), config(), "vid123", 5).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
}
