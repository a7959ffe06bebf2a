//! Lexicon-and-rule sentiment scorer, compatible with the published VADER
//! reference implementation (vaderSentiment 3.3.2).
//!
//! A text is split on whitespace, emoji are replaced by their descriptions,
//! and every lexicon hit gets its mean valence adjusted by the heuristics
//! (capitalization, degree modifiers, negation, idioms, "least", "but").
//! The adjusted valences are summed, amplified by trailing `!`/`?` runs and
//! squashed into `[-1, 1]` with `x / sqrt(x^2 + alpha)`.

mod lexicon;
mod rules;
pub mod text;

use serde::{Deserialize, Serialize};

pub use lexicon::{Lexicon, LexiconEntry, LexiconError, BUNDLED_EMOJI, BUNDLED_LEXICON};

/// Proportions of positive/neutral/negative mass plus the compound score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SentimentScores {
    pub pos: f64,
    pub neu: f64,
    pub neg: f64,
    pub compound: f64,
}

/// Tunable constants of the rule pipeline. Defaults are the reference values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleConstants {
    pub normalization_alpha: f64,
    pub booster_increment: f64,
    pub caps_boost: f64,
    pub negation_scalar: f64,
    pub but_pre_weight: f64,
    pub but_post_weight: f64,
    pub exclamation_unit: f64,
    pub exclamation_cap: usize,
    pub question_unit: f64,
    pub question_flood_total: f64,
    /// "never so good" / "never this good" intensify instead of negating.
    pub never_so_scalar: f64,
    pub booster_decay: [f64; 3],
}

impl Default for RuleConstants {
    fn default() -> Self {
        RuleConstants {
            normalization_alpha: 15.0,
            booster_increment: 0.293,
            caps_boost: 0.733,
            negation_scalar: -0.74,
            but_pre_weight: 0.5,
            but_post_weight: 1.5,
            exclamation_unit: 0.292,
            exclamation_cap: 4,
            question_unit: 0.18,
            question_flood_total: 0.96,
            never_so_scalar: 1.25,
            booster_decay: [1.0, 0.95, 0.9],
        }
    }
}

/// `raw_sum / sqrt(raw_sum^2 + alpha)`, clamped to `[-1, 1]`.
pub fn normalize(raw_sum: f64, alpha: f64) -> f64 {
    let sq = raw_sum * raw_sum;
    if sq.is_infinite() {
        return raw_sum.signum();
    }
    (raw_sum / (sq + alpha).sqrt()).clamp(-1.0, 1.0)
}

/// A lexicon paired with rule constants.
#[derive(Debug, Clone)]
pub struct Analyzer<'a> {
    lexicon: &'a Lexicon,
    constants: RuleConstants,
}

impl<'a> Analyzer<'a> {
    pub fn new(lexicon: &'a Lexicon, constants: RuleConstants) -> Self {
        Analyzer { lexicon, constants }
    }

    pub fn lexicon(&self) -> &Lexicon {
        self.lexicon
    }

    pub fn score(&self, text: &str) -> SentimentScores {
        score(text, self.lexicon, &self.constants)
    }

    /// Scores in input order.
    pub fn score_all<S: AsRef<str>>(&self, texts: &[S]) -> Vec<SentimentScores> {
        texts.iter().map(|t| self.score(t.as_ref())).collect()
    }
}

impl Default for Analyzer<'static> {
    fn default() -> Self {
        Analyzer::new(Lexicon::bundled(), RuleConstants::default())
    }
}

/// Score one text. Any string is accepted.
pub fn score(input: &str, lexicon: &Lexicon, constants: &RuleConstants) -> SentimentScores {
    let replaced = replace_emoji(input, lexicon);
    let text = text::strip(&replaced);
    let words: Vec<&str> = text::split_words(text).map(text::strip_punctuation_if_word).collect();
    if words.is_empty() {
        return SentimentScores::default();
    }
    let sentence = Sentence::new(&words, lexicon, constants);
    let mut sentiments = Vec::with_capacity(words.len());
    for i in 0..words.len() {
        let lower = sentence.lower[i].as_str();
        let is_kind_of = lower == "kind" && sentence.lower.get(i + 1).is_some_and(|w| w == "of");
        if rules::booster_sign(lower).is_some() || is_kind_of {
            sentiments.push(0.0);
        } else {
            sentiments.push(sentence.valence_at(i));
        }
    }
    sentence.apply_but(&mut sentiments);
    sentence.finish(&sentiments, text)
}

fn replace_emoji(text: &str, lexicon: &Lexicon) -> String {
    let mut out = String::with_capacity(text.len());
    let mut prev_space = true;
    for c in text.chars() {
        match lexicon.emoji_description(c) {
            Some(description) => {
                if !prev_space {
                    out.push(' ');
                }
                out.push_str(description);
                prev_space = false;
            }
            None => {
                out.push(c);
                prev_space = c == ' ';
            }
        }
    }
    out
}

struct Sentence<'a> {
    words: &'a [&'a str],
    lower: Vec<String>,
    cap_differential: bool,
    lexicon: &'a Lexicon,
    k: &'a RuleConstants,
}

impl<'a> Sentence<'a> {
    fn new(words: &'a [&'a str], lexicon: &'a Lexicon, k: &'a RuleConstants) -> Self {
        let all_caps = words.iter().filter(|w| text::is_upper(w)).count();
        Sentence {
            words,
            lower: words.iter().map(|w| w.to_lowercase()).collect(),
            cap_differential: all_caps > 0 && all_caps < words.len(),
            lexicon,
            k,
        }
    }

    fn w(&self, i: usize) -> &str {
        &self.lower[i]
    }

    fn valence_at(&self, i: usize) -> f64 {
        let Some(base) = self.lexicon.valence(self.w(i)) else {
            return 0.0;
        };
        let n = self.words.len();
        let k = self.k;
        let mut valence = base;

        // "no" directly before another lexicon word acts as a negator only
        if self.w(i) == "no" && i + 1 < n && self.lexicon.contains(self.w(i + 1)) {
            valence = 0.0;
        }
        if (i > 0 && self.w(i - 1) == "no")
            || (i > 1 && self.w(i - 2) == "no")
            || (i > 2 && self.w(i - 3) == "no" && matches!(self.w(i - 1), "or" | "nor"))
        {
            valence = base * k.negation_scalar;
        }

        if self.cap_differential && text::is_upper(self.words[i]) {
            if valence > 0.0 {
                valence += k.caps_boost;
            } else {
                valence -= k.caps_boost;
            }
        }

        for start in 0..3 {
            if i > start && !self.lexicon.contains(self.w(i - start - 1)) {
                let mut s = self.booster_scalar(i - start - 1, valence);
                if s != 0.0 {
                    s *= k.booster_decay[start];
                }
                valence += s;
                valence = self.negation_check(valence, start, i);
                if start == 2 {
                    valence = self.idioms_check(valence, i);
                }
            }
        }

        self.least_check(valence, i)
    }

    fn booster_scalar(&self, j: usize, valence: f64) -> f64 {
        let Some(sign) = rules::booster_sign(self.w(j)) else {
            return 0.0;
        };
        let mut scalar = sign * self.k.booster_increment;
        if valence < 0.0 {
            scalar = -scalar;
        }
        if self.cap_differential && text::is_upper(self.words[j]) {
            if valence > 0.0 {
                scalar += self.k.caps_boost;
            } else {
                scalar -= self.k.caps_boost;
            }
        }
        scalar
    }

    fn negation_check(&self, valence: f64, start: usize, i: usize) -> f64 {
        let neg = self.k.negation_scalar;
        match start {
            0 => {
                if rules::is_negation(self.w(i - 1)) {
                    return valence * neg;
                }
            }
            1 => {
                let (w2, w1) = (self.w(i - 2), self.w(i - 1));
                if w2 == "never" && matches!(w1, "so" | "this") {
                    return valence * self.k.never_so_scalar;
                } else if w2 == "without" && w1 == "doubt" {
                    return valence;
                } else if rules::is_negation(w2) {
                    return valence * neg;
                }
            }
            2 => {
                let (w3, w2, w1) = (self.w(i - 3), self.w(i - 2), self.w(i - 1));
                if (w3 == "never" && matches!(w2, "so" | "this")) || matches!(w1, "so" | "this") {
                    return valence * self.k.never_so_scalar;
                } else if w3 == "without" && (w2 == "doubt" || w1 == "doubt") {
                    return valence;
                } else if rules::is_negation(w3) {
                    return valence * neg;
                }
            }
            _ => {}
        }
        valence
    }

    /// Only reached with `i >= 3`.
    fn idioms_check(&self, mut valence: f64, i: usize) -> f64 {
        let n = self.words.len();
        let (w3, w2, w1, w0) = (self.w(i - 3), self.w(i - 2), self.w(i - 1), self.w(i));
        let one_zero = format!("{w1} {w0}");
        let two_one_zero = format!("{w2} {w1} {w0}");
        let two_one = format!("{w2} {w1}");
        let three_two_one = format!("{w3} {w2} {w1}");
        let three_two = format!("{w3} {w2}");

        for seq in [&one_zero, &two_one_zero, &two_one, &three_two_one, &three_two] {
            if let Some(v) = rules::special_case(seq) {
                valence = v;
                break;
            }
        }
        if n - 1 > i {
            if let Some(v) = rules::special_case(&format!("{w0} {}", self.w(i + 1))) {
                valence = v;
            }
        }
        if n - 1 > i + 1 {
            if let Some(v) = rules::special_case(&format!("{w0} {} {}", self.w(i + 1), self.w(i + 2))) {
                valence = v;
            }
        }
        for ngram in [&three_two_one, &three_two, &two_one] {
            if let Some(sign) = rules::booster_sign(ngram) {
                valence += sign * self.k.booster_increment;
            }
        }
        valence
    }

    fn least_check(&self, valence: f64, i: usize) -> f64 {
        if i > 0 && self.w(i - 1) == "least" && !self.lexicon.contains("least") {
            if i > 1 {
                if self.w(i - 2) != "at" && self.w(i - 2) != "very" {
                    return valence * self.k.negation_scalar;
                }
            } else {
                return valence * self.k.negation_scalar;
            }
        }
        valence
    }

    /// Reweights valences around the first "but".
    ///
    /// The reference locates each value by its first equal occurrence in the
    /// list, so repeated valences are reweighted at that first position.
    /// Reproduced here as-is.
    fn apply_but(&self, sentiments: &mut [f64]) {
        let Some(bi) = self.lower.iter().position(|w| w == "but") else {
            return;
        };
        for k in 0..sentiments.len() {
            let value = sentiments[k];
            let si = sentiments
                .iter()
                .position(|&s| s == value)
                .expect("value taken from the slice");
            if si < bi {
                sentiments[si] = value * self.k.but_pre_weight;
            } else if si > bi {
                sentiments[si] = value * self.k.but_post_weight;
            }
        }
    }

    fn punctuation_amplifier(&self, text: &str) -> f64 {
        let exclamations = text.matches('!').count().min(self.k.exclamation_cap);
        let questions = text.matches('?').count();
        let qm = match questions {
            0 | 1 => 0.0,
            2 | 3 => questions as f64 * self.k.question_unit,
            _ => self.k.question_flood_total,
        };
        exclamations as f64 * self.k.exclamation_unit + qm
    }

    fn finish(&self, sentiments: &[f64], text: &str) -> SentimentScores {
        let mut sum: f64 = sentiments.iter().fold(0.0, |acc, s| acc + s);
        let amplifier = self.punctuation_amplifier(text);
        if sum > 0.0 {
            sum += amplifier;
        } else if sum < 0.0 {
            sum -= amplifier;
        }
        let compound = normalize(sum, self.k.normalization_alpha);

        let mut pos_sum = 0.0;
        let mut neg_sum = 0.0;
        let mut neu_count = 0usize;
        for &s in sentiments {
            if s > 0.0 {
                pos_sum += s + 1.0;
            }
            if s < 0.0 {
                neg_sum += s - 1.0;
            }
            if s == 0.0 {
                neu_count += 1;
            }
        }
        if pos_sum > neg_sum.abs() {
            pos_sum += amplifier;
        } else if pos_sum < neg_sum.abs() {
            neg_sum -= amplifier;
        }
        let total = pos_sum + neg_sum.abs() + neu_count as f64;
        SentimentScores {
            pos: (pos_sum / total).abs(),
            neu: (neu_count as f64 / total).abs(),
            neg: (neg_sum / total).abs(),
            compound,
        }
    }
}
