//! Raw comment dumps: file ingestion (JSON or CSV) and an optional HTTP
//! fetch client that produces the same record shape.

mod fetch;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fetch::{
    backoff_delays, fetch_comments, FetchConfig, FetchError, Fetcher, HttpResponse, HttpTransport,
    TransportError, UreqTransport, API_KEY_ENV,
};

/// One comment as it came off the platform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComment {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub like_count: Option<u64>,
    #[serde(default)]
    pub is_reply: bool,
}

impl RawComment {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        RawComment {
            id: id.into(),
            text: text.into(),
            author: None,
            published_at: None,
            like_count: None,
            is_reply: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DumpSource {
    JsonFile,
    CsvFile,
    ApiFetch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpFormat {
    Json,
    Csv,
}

impl std::str::FromStr for DumpFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(DumpFormat::Json),
            "csv" => Ok(DumpFormat::Csv),
            other => Err(format!("unknown dump format `{other}` (expected json or csv)")),
        }
    }
}

/// An ordered comment collection. Order is exactly the order records were
/// read, and everything downstream relies on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommentDump {
    pub source: DumpSource,
    pub video_id: Option<String>,
    pub comments: Vec<RawComment>,
}

impl CommentDump {
    pub fn len(&self) -> usize {
        self.comments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comments.is_empty()
    }

    /// Serialize to the JSON dump schema (a top-level array of records).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.comments).expect("comment records always serialize")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: usize },
    #[error("malformed {format} at byte offset {offset}: {message}")]
    Malformed {
        format: &'static str,
        offset: usize,
        message: String,
    },
    #[error("duplicate comment id `{0}`")]
    DuplicateId(String),
    #[error("record {index} has an empty id")]
    EmptyId { index: usize },
    #[error("record `{id}` has an invalid RFC 3339 timestamp `{value}`")]
    InvalidTimestamp { id: String, value: String },
}

pub const CSV_COLUMNS: [&str; 6] = ["id", "text", "author", "published_at", "like_count", "is_reply"];

/// Parse a complete file payload into a dump.
pub fn parse_dump(bytes: &[u8], format: DumpFormat) -> Result<CommentDump, CorpusError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CorpusError::InvalidUtf8 {
        offset: e.valid_up_to(),
    })?;
    let (source, comments) = match format {
        DumpFormat::Json => (DumpSource::JsonFile, parse_json(text)?),
        DumpFormat::Csv => (DumpSource::CsvFile, parse_csv(text)?),
    };
    validate_records(&comments)?;
    Ok(CommentDump {
        source,
        video_id: None,
        comments,
    })
}

fn parse_json(text: &str) -> Result<Vec<RawComment>, CorpusError> {
    serde_json::from_str::<Vec<RawComment>>(text).map_err(|e| CorpusError::Malformed {
        format: "json",
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

/// serde_json reports 1-based line and column; turn that into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

fn parse_csv(text: &str) -> Result<Vec<RawComment>, CorpusError> {
    let malformed = |offset: u64, message: String| CorpusError::Malformed {
        format: "csv",
        offset: offset as usize,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| malformed(csv_offset(&e), e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(id_col), Some(text_col)) = (column("id"), column("text")) else {
        return Err(malformed(0, "header must contain `id` and `text` columns".into()));
    };
    let author_col = column("author");
    let published_col = column("published_at");
    let likes_col = column("like_count");
    let reply_col = column("is_reply");

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| malformed(csv_offset(&e), e.to_string()))?;
        let offset = record.position().map_or(0, |p| p.byte());
        let field = |col: Option<usize>| {
            col.and_then(|c| record.get(c))
                .filter(|v| !v.is_empty())
                .map(str::to_owned)
        };
        let like_count = match field(likes_col) {
            Some(v) => Some(
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| malformed(offset, format!("like_count `{v}` is not a non-negative integer")))?,
            ),
            None => None,
        };
        let is_reply = match field(reply_col).as_deref().map(str::trim) {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(other) => return Err(malformed(offset, format!("is_reply `{other}` is not a boolean"))),
        };
        out.push(RawComment {
            id: record.get(id_col).unwrap_or_default().to_owned(),
            text: record.get(text_col).unwrap_or_default().to_owned(),
            author: field(author_col),
            published_at: field(published_col),
            like_count,
            is_reply,
        });
    }
    Ok(out)
}

fn csv_offset(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.byte())
}

fn validate_records(comments: &[RawComment]) -> Result<(), CorpusError> {
    let mut seen = HashSet::with_capacity(comments.len());
    for (index, c) in comments.iter().enumerate() {
        if c.id.is_empty() {
            return Err(CorpusError::EmptyId { index });
        }
        if let Some(ts) = &c.published_at {
            if chrono::DateTime::parse_from_rfc3339(ts).is_err() {
                return Err(CorpusError::InvalidTimestamp {
                    id: c.id.clone(),
                    value: ts.clone(),
                });
            }
        }
        if !seen.insert(c.id.as_str()) {
            return Err(CorpusError::DuplicateId(c.id.clone()));
        }
    }
    Ok(())
}

/// Serialize records to the CSV dump schema.
pub fn to_csv(comments: &[RawComment]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS).expect("in-memory write");
    for c in comments {
        let likes = c.like_count.map(|n| n.to_string()).unwrap_or_default();
        writer
            .write_record([
                c.id.as_str(),
                c.text.as_str(),
                c.author.as_deref().unwrap_or(""),
                c.published_at.as_deref().unwrap_or(""),
                likes.as_str(),
                if c.is_reply { "true" } else { "false" },
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv of UTF-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_array_is_empty_dump() {
        let dump = parse_dump(b"[]", DumpFormat::Json).unwrap();
        assert!(dump.is_empty());
        assert_eq!(dump.source, DumpSource::JsonFile);
    }

    #[test]
    fn single_record_optionals_absent() {
        let dump = parse_dump(br#"[{"id":"a1","text":"Nice phone"}]"#, DumpFormat::Json).unwrap();
        assert_eq!(dump.comments, vec![RawComment::new("a1", "Nice phone")]);
    }

    #[test]
    fn unknown_fields_ignored() {
        let bytes = br#"[{"id":"a1","text":"hi","kind":"youtube#comment","etag":"x","like_count":3}]"#;
        let dump = parse_dump(bytes, DumpFormat::Json).unwrap();
        assert_eq!(dump.comments[0].like_count, Some(3));
    }

    #[test]
    fn duplicate_id_named() {
        let bytes = br#"[{"id":"a1","text":"x"},{"id":"a1","text":"y"}]"#;
        let err = parse_dump(bytes, DumpFormat::Json).unwrap_err();
        assert_eq!(err, CorpusError::DuplicateId("a1".into()));
        assert!(err.to_string().contains("a1"));
    }

    #[test]
    fn invalid_utf8_reports_offset() {
        let mut bytes = br#"[{"id":"a1","text":""#.to_vec();
        let at = bytes.len();
        bytes.extend_from_slice(&[0xff, 0xfe]);
        bytes.extend_from_slice(br#""}]"#);
        assert_eq!(
            parse_dump(&bytes, DumpFormat::Json).unwrap_err(),
            CorpusError::InvalidUtf8 { offset: at }
        );
    }

    #[test]
    fn malformed_json_reports_offset() {
        let bytes = b"[\n{\"id\":\"a1\",\"text\":}]";
        match parse_dump(bytes, DumpFormat::Json).unwrap_err() {
            CorpusError::Malformed { format, offset, .. } => {
                assert_eq!(format, "json");
                assert_eq!(bytes[offset], b'}');
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_text_is_malformed() {
        assert!(matches!(
            parse_dump(br#"[{"id":"a1"}]"#, DumpFormat::Json),
            Err(CorpusError::Malformed { .. })
        ));
    }

    #[test]
    fn negative_like_count_rejected() {
        assert!(parse_dump(br#"[{"id":"a","text":"t","like_count":-1}]"#, DumpFormat::Json).is_err());
    }

    #[test]
    fn bad_timestamp_rejected() {
        let bytes = br#"[{"id":"a","text":"t","published_at":"yesterday"}]"#;
        assert!(matches!(
            parse_dump(bytes, DumpFormat::Json),
            Err(CorpusError::InvalidTimestamp { .. })
        ));
        let ok = br#"[{"id":"a","text":"t","published_at":"2021-09-24T10:00:00Z"}]"#;
        assert!(parse_dump(ok, DumpFormat::Json).is_ok());
    }

    #[test]
    fn csv_quoted_fields() {
        let csv = "id,text,author,published_at,like_count,is_reply\n\
                   c1,\"Great, really great\nsecond line\",bob,2021-09-24T10:00:00Z,4,false\n\
                   c2,\"He said \"\"wow\"\"\",,,,true\n";
        let dump = parse_dump(csv.as_bytes(), DumpFormat::Csv).unwrap();
        assert_eq!(dump.source, DumpSource::CsvFile);
        assert_eq!(dump.comments[0].text, "Great, really great\nsecond line");
        assert_eq!(dump.comments[0].author.as_deref(), Some("bob"));
        assert_eq!(dump.comments[0].like_count, Some(4));
        assert_eq!(dump.comments[1].text, "He said \"wow\"");
        assert!(dump.comments[1].is_reply);
        assert_eq!(dump.comments[1].author, None);
    }

    #[test]
    fn csv_bad_like_count() {
        let csv = "id,text,author,published_at,like_count,is_reply\nc1,hi,,,many,false\n";
        assert!(matches!(
            parse_dump(csv.as_bytes(), DumpFormat::Csv),
            Err(CorpusError::Malformed { format: "csv", .. })
        ));
    }

    #[test]
    fn csv_duplicate_id() {
        let csv = "id,text,author,published_at,like_count,is_reply\nc1,a,,,,\nc1,b,,,,\n";
        assert_eq!(
            parse_dump(csv.as_bytes(), DumpFormat::Csv).unwrap_err(),
            CorpusError::DuplicateId("c1".into())
        );
    }

    fn arb_comment() -> impl Strategy<Value = RawComment> {
        (
            "[a-z0-9]{1,8}",
            any::<String>(),
            proptest::option::of("[A-Za-z ]{0,10}"),
            proptest::option::of(Just("2021-10-01T12:30:00+05:30".to_string())),
            proptest::option::of(0u64..1_000_000),
            any::<bool>(),
        )
            .prop_map(|(id, text, author, published_at, like_count, is_reply)| RawComment {
                id,
                text,
                author,
                published_at,
                like_count,
                is_reply,
            })
    }

    fn unique(mut v: Vec<RawComment>) -> Vec<RawComment> {
        let mut seen = HashSet::new();
        v.retain(|c| seen.insert(c.id.clone()));
        v
    }

    proptest! {
        #[test]
        fn json_round_trip(comments in proptest::collection::vec(arb_comment(), 0..20)) {
            let dump = CommentDump { source: DumpSource::JsonFile, video_id: None, comments: unique(comments) };
            let again = parse_dump(dump.to_json().as_bytes(), DumpFormat::Json).unwrap();
            prop_assert_eq!(again, dump);
        }

        #[test]
        fn csv_round_trip(comments in proptest::collection::vec(arb_comment(), 0..20)) {
            let comments: Vec<_> = unique(comments)
                .into_iter()
                .map(|mut c| { if c.author.as_deref() == Some("") { c.author = None; } c })
                .collect();
            let again = parse_dump(to_csv(&comments).as_bytes(), DumpFormat::Csv).unwrap();
            prop_assert_eq!(again.comments, comments);
        }

        #[test]
        fn parse_is_pure(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            prop_assert_eq!(parse_dump(&bytes, DumpFormat::Json), parse_dump(&bytes, DumpFormat::Json));
        }
    }
}
