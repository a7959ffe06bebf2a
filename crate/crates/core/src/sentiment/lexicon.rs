use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::text;

/// The bundled valence lexicon (vaderSentiment 3.3.2 distribution).
pub const BUNDLED_LEXICON: &str = include_str!("../../data/vader_lexicon.txt");
/// The bundled emoji description table (vaderSentiment 3.3.2 distribution).
pub const BUNDLED_EMOJI: &str = include_str!("../../data/emoji_utf8_lexicon.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("{file} is not valid UTF-8")]
    InvalidUtf8 { file: &'static str },
    #[error("{file} line {line}: expected at least two tab-separated fields")]
    MalformedLine { file: &'static str, line: usize },
    #[error("lexicon line {line}: valence `{value}` is not a finite number")]
    NonNumericValence { line: usize, value: String },
    #[error("lexicon line {line}: valence {value} outside [-4, 4]")]
    ValenceOutOfRange { line: usize, value: String },
    #[error("lexicon line {line}: standard deviation `{value}` is not a number")]
    NonNumericStdDev { line: usize, value: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub valence: f64,
    /// Parsed for completeness; scoring only uses the mean.
    pub std_dev: Option<f64>,
    pub ratings: Option<String>,
}

/// Token valences plus the emoji-to-description table.
///
/// Lookups are always made with the lower-cased token, so the handful of
/// mixed-case emoticon entries in the distributed file can never match;
/// they are kept verbatim to stay bit-compatible with that file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: HashMap<String, LexiconEntry>,
    emoji: HashMap<String, String>,
    emoji_chars: HashMap<char, String>,
}

impl Lexicon {
    pub fn load(lexicon: &[u8], emoji: Option<&[u8]>) -> Result<Self, LexiconError> {
        let lexicon = std::str::from_utf8(lexicon).map_err(|_| LexiconError::InvalidUtf8 { file: "lexicon" })?;
        let emoji = emoji
            .map(|b| std::str::from_utf8(b).map_err(|_| LexiconError::InvalidUtf8 { file: "emoji table" }))
            .transpose()?;
        Self::parse(lexicon, emoji)
    }

    pub fn parse(lexicon: &str, emoji: Option<&str>) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        for (n, raw) in lexicon.lines().enumerate() {
            let line_no = n + 1;
            let line = text::strip(raw);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(token), Some(measure)) = (fields.next(), fields.next()) else {
                return Err(LexiconError::MalformedLine { file: "lexicon", line: line_no });
            };
            let valence: f64 = measure
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| LexiconError::NonNumericValence {
                    line: line_no,
                    value: measure.to_string(),
                })?;
            if !(-4.0..=4.0).contains(&valence) {
                return Err(LexiconError::ValenceOutOfRange {
                    line: line_no,
                    value: measure.to_string(),
                });
            }
            let std_dev = match fields.next() {
                Some(s) => Some(s.trim().parse::<f64>().map_err(|_| LexiconError::NonNumericStdDev {
                    line: line_no,
                    value: s.to_string(),
                })?),
                None => None,
            };
            let ratings = fields.next().map(str::to_owned);
            lex.entries.insert(
                token.to_string(),
                LexiconEntry {
                    valence,
                    std_dev,
                    ratings,
                },
            );
        }
        if let Some(emoji) = emoji {
            for (n, raw) in emoji.lines().enumerate() {
                let line = text::strip(raw);
                if line.is_empty() {
                    continue;
                }
                let mut fields = line.split('\t');
                let (Some(symbol), Some(description)) = (fields.next(), fields.next()) else {
                    return Err(LexiconError::MalformedLine {
                        file: "emoji table",
                        line: n + 1,
                    });
                };
                lex.insert_emoji(symbol, description);
            }
        }
        Ok(lex)
    }

    /// The lexicon shipped with the crate, parsed once.
    pub fn bundled() -> &'static Lexicon {
        static BUNDLED: OnceLock<Lexicon> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            Lexicon::parse(BUNDLED_LEXICON, Some(BUNDLED_EMOJI)).expect("bundled lexicon is well-formed")
        })
    }

    fn insert_emoji(&mut self, symbol: &str, description: &str) {
        let mut chars = symbol.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            self.emoji_chars.insert(c, description.to_string());
        }
        self.emoji.insert(symbol.to_string(), description.to_string());
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.entries.get(token).map(|e| e.valence)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn entry(&self, token: &str) -> Option<&LexiconEntry> {
        self.entries.get(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn emoji_map(&self) -> &HashMap<String, String> {
        &self.emoji
    }

    /// Description for a single-codepoint emoji. Multi-codepoint sequences in
    /// the table are never substituted, matching the reference scorer, which
    /// walks the text one codepoint at a time.
    pub fn emoji_description(&self, c: char) -> Option<&str> {
        self.emoji_chars.get(&c).map(String::as_str)
    }
}
