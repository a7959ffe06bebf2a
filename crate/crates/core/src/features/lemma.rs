use std::collections::HashMap;

pub const BUNDLED_LEMMAS: &str = include_str!("../../data/lemmas_en.tsv");

/// Lookup-table lemmatizer with suffix-rule fallback.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lemmatizer {
    table: HashMap<String, String>,
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn is_consonant(c: u8) -> bool {
    c.is_ascii_lowercase() && !is_vowel(c)
}

impl Lemmatizer {
    /// Parse a `surface<TAB>lemma` table. Blank lines and lines without a
    /// tab are skipped.
    pub fn from_tsv(tsv: &str) -> Self {
        let table = tsv
            .lines()
            .filter_map(|l| l.split_once('\t'))
            .map(|(s, l)| (s.trim().to_lowercase(), l.trim().to_lowercase()))
            .filter(|(s, l)| !s.is_empty() && !l.is_empty())
            .collect();
        Lemmatizer { table }
    }

    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_LEMMAS)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn lemmatize(&self, token: &str) -> String {
        if let Some(lemma) = self.table.get(token) {
            return lemma.clone();
        }
        suffix_rules(token).unwrap_or_else(|| token.to_string())
    }
}

/// Ordered suffix rules for regular inflections; `None` leaves the token as is.
fn suffix_rules(token: &str) -> Option<String> {
    if !token.bytes().all(|b| b.is_ascii_lowercase()) || token.len() < 4 {
        return None;
    }
    let b = token.as_bytes();
    let n = b.len();

    if token.ends_with("ies") && n > 4 {
        return Some(format!("{}y", &token[..n - 3]));
    }
    for suffix in ["sses", "xes", "ches", "shes"] {
        if token.ends_with(suffix) {
            return Some(token[..n - 2].to_string());
        }
    }
    if token.ends_with('s') && !["ss", "us", "is"].iter().any(|s| token.ends_with(s)) {
        return Some(token[..n - 1].to_string());
    }
    if let Some(stem) = token.strip_suffix("ing") {
        return verb_stem(stem, false);
    }
    if let Some(stem) = token.strip_suffix("ed") {
        return verb_stem(stem, true);
    }
    None
}

fn verb_stem(stem: &str, past: bool) -> Option<String> {
    let b = stem.as_bytes();
    let n = b.len();
    if n < 3 || !b.iter().copied().any(is_vowel) {
        return None;
    }
    let last = b[n - 1];
    let prev = b[n - 2];
    // running -> run, stopped -> stop
    if last == prev && is_consonant(last) && !matches!(last, b'l' | b's' | b'z') {
        return Some(stem[..n - 1].to_string());
    }
    let needs_e = matches!(last, b'v' | b'z' | b'c')
        || (last == b't' && prev == b'a' && n >= 4 && is_consonant(b[n - 3]))
        || (last == b'g' && prev == b'r')
        || (past && last == b'g' && prev == b'n')
        || (n == 3 && is_consonant(b[0]) && is_vowel(b[1]) && is_consonant(last) && !matches!(last, b'w' | b'x' | b'y'));
    if needs_e {
        Some(format!("{stem}e"))
    } else {
        Some(stem.to_string())
    }
}
