//! Paginated comment-thread client.
//!
//! Speaks the comment-threads endpoint shape documented in
//! `docs/comment_threads_api.md`. The transport is a trait so tests can
//! replay recorded responses without a network.

use std::collections::HashSet;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use super::{CommentDump, DumpSource, RawComment};

pub const API_KEY_ENV: &str = "UNBOX_API_KEY";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

#[derive(Debug, Error)]
#[error("transport failure: {0}")]
pub struct TransportError(pub String);

/// Issues a GET with the given query parameters.
pub trait HttpTransport {
    fn get(&self, url: &str, query: &[(&str, String)]) -> Result<HttpResponse, TransportError>;
}

/// Blocking transport backed by `ureq`.
pub struct UreqTransport {
    agent: ureq::Agent,
}

impl Default for UreqTransport {
    fn default() -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(30)))
            .build()
            .into();
        UreqTransport { agent }
    }
}

impl HttpTransport for UreqTransport {
    fn get(&self, url: &str, query: &[(&str, String)]) -> Result<HttpResponse, TransportError> {
        let mut request = self.agent.get(url);
        for (k, v) in query {
            request = request.query(k, v);
        }
        let mut response = request.call().map_err(|e| TransportError(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FetchConfig {
    pub base_url: String,
    pub api_key: String,
    /// Page size requested from the server (the platform caps it at 100).
    pub max_results: u32,
    pub max_retries: u32,
    pub base_delay: Duration,
}

impl FetchConfig {
    pub const DEFAULT_BASE_URL: &'static str = "https://www.googleapis.com/youtube/v3/commentThreads";

    pub fn new(api_key: impl Into<String>) -> Self {
        FetchConfig {
            base_url: Self::DEFAULT_BASE_URL.to_string(),
            api_key: api_key.into(),
            max_results: 100,
            max_retries: 3,
            base_delay: Duration::from_millis(500),
        }
    }

    /// Reads the key from `UNBOX_API_KEY`.
    pub fn from_env() -> Option<Self> {
        std::env::var(API_KEY_ENV)
            .ok()
            .filter(|k| !k.is_empty())
            .map(Self::new)
    }
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("missing API credentials (set {API_KEY_ENV} or `api_key` in the config)")]
    MissingCredentials,
    #[error("authentication rejected (HTTP {status})")]
    Auth { status: u16 },
    #[error("video `{0}` not found")]
    NotFound(String),
    #[error("rate limited after {attempts} attempts (last HTTP {status})")]
    RateLimited { attempts: u32, status: u16 },
    #[error("unexpected HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("malformed API response: {0}")]
    Decode(String),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

/// Delays slept before each retry: `base * 2^k` for `k` in `0..retries`.
pub fn backoff_delays(base: Duration, retries: u32) -> Vec<Duration> {
    (0..retries).map(|k| base * 2u32.pow(k)).collect()
}

type Sleeper = Box<dyn Fn(Duration) + Send + Sync>;

pub struct Fetcher<T> {
    transport: T,
    config: FetchConfig,
    sleep: Sleeper,
}

impl<T: HttpTransport> Fetcher<T> {
    pub fn new(transport: T, config: FetchConfig) -> Self {
        Fetcher {
            transport,
            config,
            sleep: Box::new(std::thread::sleep),
        }
    }

    /// Replace the sleep function used between retries.
    pub fn with_sleeper(mut self, sleep: impl Fn(Duration) + Send + Sync + 'static) -> Self {
        self.sleep = Box::new(sleep);
        self
    }

    pub fn fetch(&self, video_id: &str, page_limit: u32) -> Result<CommentDump, FetchError> {
        let mut dump = CommentDump {
            source: DumpSource::ApiFetch,
            video_id: Some(video_id.to_string()),
            comments: Vec::new(),
        };
        if page_limit == 0 {
            return Ok(dump);
        }
        if self.config.api_key.is_empty() {
            return Err(FetchError::MissingCredentials);
        }
        let mut seen = HashSet::new();
        let mut page_token: Option<String> = None;
        for _ in 0..page_limit {
            let page = self.fetch_page(video_id, page_token.as_deref())?;
            for comment in page.comments {
                if seen.insert(comment.id.clone()) {
                    dump.comments.push(comment);
                }
            }
            match page.next_page_token {
                Some(token) if !token.is_empty() => page_token = Some(token),
                _ => break,
            }
        }
        Ok(dump)
    }

    fn fetch_page(&self, video_id: &str, page_token: Option<&str>) -> Result<Page, FetchError> {
        let mut query = vec![
            ("part", "snippet,replies".to_string()),
            ("videoId", video_id.to_string()),
            ("maxResults", self.config.max_results.to_string()),
            ("key", self.config.api_key.clone()),
        ];
        if let Some(token) = page_token {
            query.push(("pageToken", token.to_string()));
        }

        let delays = backoff_delays(self.config.base_delay, self.config.max_retries);
        let mut attempt = 0;
        loop {
            let response = self.transport.get(&self.config.base_url, &query)?;
            match response.status {
                200..=299 => return parse_page(&response.body),
                401 | 403 => return Err(FetchError::Auth { status: response.status }),
                404 => return Err(FetchError::NotFound(video_id.to_string())),
                429 | 500..=599 => {
                    if let Some(delay) = delays.get(attempt) {
                        (self.sleep)(*delay);
                        attempt += 1;
                    } else {
                        return Err(FetchError::RateLimited {
                            attempts: attempt as u32 + 1,
                            status: response.status,
                        });
                    }
                }
                status => {
                    return Err(FetchError::Http {
                        status,
                        body: response.body,
                    })
                }
            }
        }
    }
}

/// Convenience wrapper around [`Fetcher::fetch`].
pub fn fetch_comments<T: HttpTransport>(
    transport: T,
    config: FetchConfig,
    video_id: &str,
    page_limit: u32,
) -> Result<CommentDump, FetchError> {
    Fetcher::new(transport, config).fetch(video_id, page_limit)
}

struct Page {
    comments: Vec<RawComment>,
    next_page_token: Option<String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ThreadListResponse {
    next_page_token: Option<String>,
    #[serde(default)]
    items: Vec<Thread>,
}

#[derive(Deserialize)]
struct Thread {
    snippet: ThreadSnippet,
    #[serde(default)]
    replies: Option<Replies>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ThreadSnippet {
    top_level_comment: ApiComment,
}

#[derive(Deserialize)]
struct Replies {
    #[serde(default)]
    comments: Vec<ApiComment>,
}

#[derive(Deserialize)]
struct ApiComment {
    id: String,
    snippet: CommentSnippet,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CommentSnippet {
    text_original: Option<String>,
    text_display: Option<String>,
    author_display_name: Option<String>,
    published_at: Option<String>,
    like_count: Option<u64>,
}

impl ApiComment {
    fn into_raw(self, is_reply: bool) -> RawComment {
        let s = self.snippet;
        RawComment {
            id: self.id,
            text: s.text_original.or(s.text_display).unwrap_or_default(),
            author: s.author_display_name,
            published_at: s.published_at,
            like_count: s.like_count,
            is_reply,
        }
    }
}

fn parse_page(body: &str) -> Result<Page, FetchError> {
    let response: ThreadListResponse =
        serde_json::from_str(body).map_err(|e| FetchError::Decode(e.to_string()))?;
    let mut comments = Vec::new();
    for thread in response.items {
        comments.push(thread.snippet.top_level_comment.into_raw(false));
        if let Some(replies) = thread.replies {
            comments.extend(replies.comments.into_iter().map(|c| c.into_raw(true)));
        }
    }
    Ok(Page {
        comments,
        next_page_token: response.next_page_token,
    })
}
