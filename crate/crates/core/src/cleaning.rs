//! Comment filters: empty, non-English, numeral-only, bot-like capitals,
//! and exact duplicates.
//!
//! Filters run per comment in that fixed order and each removal is charged
//! to the first filter that rejects the comment, so
//! `input_count == output_count + sum(removed_*)` always holds.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{CommentDump, RawComment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleaningConfig {
    /// A comment is dropped when its caps ratio is strictly above this.
    pub caps_ratio_threshold: f64,
    /// Minimum share of letters drawn from the Latin script.
    pub english_latin_ratio_threshold: f64,
    /// Comments with fewer non-whitespace characters than this are dropped.
    pub min_length: usize,
    pub dedup_case_sensitive: bool,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig {
            caps_ratio_threshold: 0.5,
            english_latin_ratio_threshold: 0.8,
            min_length: 1,
            dedup_case_sensitive: true,
        }
    }
}

impl CleaningConfig {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.caps_ratio_threshold > 0.0 && self.caps_ratio_threshold <= 1.0) {
            out.push("caps_ratio_threshold must be in (0,1]".to_string());
        }
        if !(self.english_latin_ratio_threshold > 0.0 && self.english_latin_ratio_threshold <= 1.0) {
            out.push("english_latin_ratio_threshold must be in (0,1]".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CleanComment {
    pub id: String,
    pub text: String,
}

impl From<&RawComment> for CleanComment {
    fn from(c: &RawComment) -> Self {
        CleanComment {
            id: c.id.clone(),
            text: c.text.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningStats {
    pub input_count: usize,
    pub removed_empty: usize,
    pub removed_non_english: usize,
    pub removed_numeric_only: usize,
    pub removed_caps: usize,
    pub removed_duplicates: usize,
    pub output_count: usize,
}

impl CleaningStats {
    pub fn removed_total(&self) -> usize {
        self.removed_empty
            + self.removed_non_english
            + self.removed_numeric_only
            + self.removed_caps
            + self.removed_duplicates
    }

    pub fn is_consistent(&self) -> bool {
        self.input_count == self.output_count + self.removed_total()
    }
}

/// Which filter rejected a comment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    Empty,
    NonEnglish,
    NumericOnly,
    Caps,
    Duplicate,
}

const NUMERIC_PUNCTUATION: &[char] = &['.', ',', ':', '%', '+', '-'];

/// True when the text holds at least one digit and nothing but digits,
/// whitespace and `.,:%+-`.
pub fn is_numeric_only(text: &str) -> bool {
    let mut has_digit = false;
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        if c.is_ascii_digit() {
            has_digit = true;
        } else if !NUMERIC_PUNCTUATION.contains(&c) {
            return false;
        }
    }
    has_digit
}

/// Share of cased letters that are upper case; 0 when there are none.
pub fn caps_ratio(text: &str) -> f64 {
    let (upper, cased) = text.chars().fold((0usize, 0usize), |(u, n), c| {
        if c.is_uppercase() {
            (u + 1, n + 1)
        } else if c.is_lowercase() {
            (u, n + 1)
        } else {
            (u, n)
        }
    });
    if cased == 0 {
        0.0
    } else {
        upper as f64 / cased as f64
    }
}

fn is_latin_letter(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z'
        | '\u{00C0}'..='\u{00D6}' | '\u{00D8}'..='\u{00F6}' | '\u{00F8}'..='\u{024F}'
        | '\u{1E00}'..='\u{1EFF}')
}

/// Script-ratio language check. Letter-free text (emoji, punctuation) passes.
pub fn is_english_like(text: &str, config: &CleaningConfig) -> bool {
    let (latin, letters) = text
        .chars()
        .filter(|c| c.is_alphabetic())
        .fold((0usize, 0usize), |(l, n), c| (l + is_latin_letter(c) as usize, n + 1));
    letters == 0 || latin as f64 / letters as f64 >= config.english_latin_ratio_threshold
}

/// The per-comment filters, without deduplication.
pub fn reject_reason(text: &str, config: &CleaningConfig) -> Option<Rejection> {
    if text.chars().filter(|c| !c.is_whitespace()).count() < config.min_length {
        Some(Rejection::Empty)
    } else if !is_english_like(text, config) {
        Some(Rejection::NonEnglish)
    } else if is_numeric_only(text) {
        Some(Rejection::NumericOnly)
    } else if caps_ratio(text) > config.caps_ratio_threshold {
        Some(Rejection::Caps)
    } else {
        None
    }
}

fn dedup_key(text: &str, case_sensitive: bool) -> String {
    if case_sensitive {
        text.to_string()
    } else {
        text.to_lowercase()
    }
}

pub fn clean_corpus(dump: &CommentDump, config: &CleaningConfig) -> (Vec<CleanComment>, CleaningStats) {
    clean_comments(&dump.comments, config)
}

pub fn clean_comments(comments: &[RawComment], config: &CleaningConfig) -> (Vec<CleanComment>, CleaningStats) {
    let mut stats = CleaningStats {
        input_count: comments.len(),
        ..Default::default()
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for comment in comments {
        match reject_reason(&comment.text, config) {
            Some(Rejection::Empty) => stats.removed_empty += 1,
            Some(Rejection::NonEnglish) => stats.removed_non_english += 1,
            Some(Rejection::NumericOnly) => stats.removed_numeric_only += 1,
            Some(Rejection::Caps) => stats.removed_caps += 1,
            Some(Rejection::Duplicate) => unreachable!("duplicates are detected below"),
            None => {
                if seen.insert(dedup_key(&comment.text, config.dedup_case_sensitive)) {
                    out.push(CleanComment::from(comment));
                } else {
                    stats.removed_duplicates += 1;
                }
            }
        }
    }
    stats.output_count = out.len();
    (out, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DumpSource;
    use proptest::prelude::*;

    fn dump(texts: &[&str]) -> CommentDump {
        CommentDump {
            source: DumpSource::JsonFile,
            video_id: None,
            comments: texts
                .iter()
                .enumerate()
                .map(|(i, t)| RawComment::new(format!("c{i}"), *t))
                .collect(),
        }
    }

    #[test]
    fn numeric_only() {
        assert!(is_numeric_only("12345"));
        assert!(is_numeric_only(" 1,299.99 "));
        assert!(is_numeric_only("+94 77-123"));
        assert!(is_numeric_only("12:30"));
        assert!(!is_numeric_only(""));
        assert!(!is_numeric_only("..."));
        assert!(!is_numeric_only("13 pro max"));
    }

    #[test]
    fn caps() {
        assert_eq!(caps_ratio("BEST PHONE EVER"), 1.0);
        assert_eq!(caps_ratio("Nice"), 0.25);
        assert_eq!(caps_ratio("!!!"), 0.0);
        assert_eq!(caps_ratio("PHONE 13!!"), 1.0);
    }

    #[test]
    fn english_like() {
        let cfg = CleaningConfig::default();
        assert!(is_english_like("great phone", &cfg));
        assert!(!is_english_like("ඉතා හොඳ දුරකථනයක්", &cfg));
        assert!(!is_english_like("Отличный телефон", &cfg));
        assert!(!is_english_like("手机很好", &cfg));
        assert!(is_english_like("👍👍👍", &cfg));
        assert!(is_english_like("café is great", &cfg));
    }

    #[test]
    fn composed_example() {
        let (out, stats) = clean_corpus(&dump(&["12345", "Great camera", "Great camera"]), &CleaningConfig::default());
        assert_eq!(out.iter().map(|c| c.text.as_str()).collect::<Vec<_>>(), ["Great camera"]);
        assert_eq!(out[0].id, "c1");
        assert_eq!(stats.removed_numeric_only, 1);
        assert_eq!(stats.removed_duplicates, 1);
        assert_eq!(stats.output_count, 1);
        assert!(stats.is_consistent());
    }

    #[test]
    fn empty_corpus() {
        let (out, stats) = clean_corpus(&dump(&[]), &CleaningConfig::default());
        assert!(out.is_empty());
        assert_eq!(stats, CleaningStats::default());
    }

    #[test]
    fn nothing_filterable() {
        let texts = [
            "Great camera", "Battery lasts all day", "Love the colour", "Too expensive for me",
            "The notch is smaller", "Nice review", "Screen looks sharp", "Waiting for the Pro",
            "Mine arrived yesterday", "Is it worth the upgrade?",
        ];
        let (out, stats) = clean_corpus(&dump(&texts), &CleaningConfig::default());
        assert_eq!(out.len(), 10);
        assert_eq!(stats, CleaningStats { input_count: 10, output_count: 10, ..Default::default() });
    }

    #[test]
    fn each_filter_attributed() {
        let (out, stats) = clean_corpus(
            &dump(&["   ", "Привет всем", "100%", "SUBSCRIBE TO MY CHANNEL", "ok", "ok", "👍"]),
            &CleaningConfig::default(),
        );
        assert_eq!(stats.removed_empty, 1);
        assert_eq!(stats.removed_non_english, 1);
        assert_eq!(stats.removed_numeric_only, 1);
        assert_eq!(stats.removed_caps, 1);
        assert_eq!(stats.removed_duplicates, 1);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn half_caps_is_kept() {
        // exactly half is not "more than half"
        let (out, _) = clean_corpus(&dump(&["ABcd"]), &CleaningConfig::default());
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn case_insensitive_dedup() {
        let cfg = CleaningConfig { dedup_case_sensitive: false, ..Default::default() };
        let (out, stats) = clean_corpus(&dump(&["Great phone", "great phone"]), &cfg);
        assert_eq!(out.len(), 1);
        assert_eq!(stats.removed_duplicates, 1);
        let (out, _) = clean_corpus(&dump(&["Great phone", "great phone"]), &CleaningConfig::default());
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn config_ranges() {
        let cfg = CleaningConfig { caps_ratio_threshold: 0.0, english_latin_ratio_threshold: 1.5, ..Default::default() };
        assert_eq!(cfg.violations().len(), 2);
        assert!(CleaningConfig::default().violations().is_empty());
    }

    proptest! {
        #[test]
        fn caps_threshold_monotone(texts in proptest::collection::vec("[A-Za-z !]{0,12}", 0..30), a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
            let d = dump(&refs);
            let (_, s_lo) = clean_corpus(&d, &CleaningConfig { caps_ratio_threshold: lo, ..Default::default() });
            let (_, s_hi) = clean_corpus(&d, &CleaningConfig { caps_ratio_threshold: hi, ..Default::default() });
            prop_assert!(s_hi.removed_caps <= s_lo.removed_caps);
        }

        #[test]
        fn ratio_in_unit_interval(text in any::<String>()) {
            let r = caps_ratio(&text);
            prop_assert!((0.0..=1.0).contains(&r));
        }
    }
}
