//! Pipeline configuration: a flat `key = value` file.
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths are
//! resolved against the directory holding the file. Command-line flags go
//! through [`PipelineConfig::set`] after the file, so they win.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cleaning::CleaningConfig;
use crate::corpus::DumpFormat;
use crate::labeling::DEFAULT_THRESHOLD;
use crate::models::{ClassifierKind, DtConfig, SplitSpec, SvmConfig, TrainConfig};

/// Every problem found in a configuration, reported together.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigViolations(pub Vec<String>);

impl fmt::Display for ConfigViolations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration ({} problem", self.0.len())?;
        if self.0.len() != 1 {
            f.write_str("s")?;
        }
        f.write_str(")")?;
        for v in &self.0 {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

/// Which classifiers a run trains and evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierSelection {
    One(ClassifierKind),
    All,
}

impl ClassifierSelection {
    pub fn kinds(self) -> Vec<ClassifierKind> {
        match self {
            ClassifierSelection::One(k) => vec![k],
            ClassifierSelection::All => ClassifierKind::ALL.to_vec(),
        }
    }
}

impl std::str::FromStr for ClassifierSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            Ok(ClassifierSelection::All)
        } else {
            s.parse().map(ClassifierSelection::One)
        }
    }
}

impl fmt::Display for ClassifierSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierSelection::One(k) => write!(f, "{k}"),
            ClassifierSelection::All => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub format: DumpFormat,
    /// `None` means the bundled resource.
    pub lexicon: Option<PathBuf>,
    pub emoji_lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lemma_table: Option<PathBuf>,
    pub include_replies: bool,
    pub cleaning: CleaningConfig,
    pub label_threshold: f64,
    pub min_df: f64,
    pub split: SplitSpec,
    pub classifier: ClassifierSelection,
    pub train: TrainConfig,
    pub out: PathBuf,
    pub corpus_name: String,
    pub video_id: Option<String>,
    pub api_base_url: Option<String>,
    /// Falls back to `UNBOX_API_KEY` when unset.
    pub api_key: Option<String>,
    pub page_limit: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: None,
            format: DumpFormat::Json,
            lexicon: None,
            emoji_lexicon: None,
            stopwords: None,
            lemma_table: None,
            include_replies: true,
            cleaning: CleaningConfig::default(),
            label_threshold: DEFAULT_THRESHOLD,
            min_df: crate::features::DEFAULT_MIN_DF,
            split: SplitSpec::default(),
            classifier: ClassifierSelection::All,
            train: TrainConfig::default(),
            out: PathBuf::from("out"),
            corpus_name: "corpus".to_string(),
            video_id: None,
            api_base_url: None,
            api_key: None,
            page_limit: 10,
        }
    }
}

/// Keys accepted in the file and as `--key` flags (with `_` spelled `-`).
pub const KEYS: &[&str] = &[
    "input",
    "format",
    "lexicon",
    "emoji_lexicon",
    "stopwords",
    "lemma_table",
    "include_replies",
    "caps_ratio_threshold",
    "english_latin_ratio_threshold",
    "min_length",
    "dedup_case_sensitive",
    "label_threshold",
    "min_df",
    "split_fraction",
    "seed",
    "stratified",
    "classifier",
    "nb_alpha",
    "dt_max_depth",
    "dt_min_samples_split",
    "svm_c",
    "svm_epochs",
    "svm_tolerance",
    "out",
    "corpus_name",
    "video_id",
    "api_base_url",
    "api_key",
    "page_limit",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: `{value}` is not a valid number"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{key}: `{value}` is not a boolean")),
    }
}

fn resolve(base: &Path, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

impl PipelineConfig {
    /// Apply one key. Paths are resolved against `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), String> {
        let value = value.trim();
        match key {
            "input" => self.input = Some(resolve(base, value)),
            "format" => self.format = value.parse().map_err(|e| format!("format: {e}"))?,
            "lexicon" => self.lexicon = Some(resolve(base, value)),
            "emoji_lexicon" => self.emoji_lexicon = Some(resolve(base, value)),
            "stopwords" => self.stopwords = Some(resolve(base, value)),
            "lemma_table" => self.lemma_table = Some(resolve(base, value)),
            "include_replies" => self.include_replies = parse_bool(key, value)?,
            "caps_ratio_threshold" => self.cleaning.caps_ratio_threshold = parse_num(key, value)?,
            "english_latin_ratio_threshold" => self.cleaning.english_latin_ratio_threshold = parse_num(key, value)?,
            "min_length" => self.cleaning.min_length = parse_num(key, value)?,
            "dedup_case_sensitive" => self.cleaning.dedup_case_sensitive = parse_bool(key, value)?,
            "label_threshold" => self.label_threshold = parse_num(key, value)?,
            "min_df" => self.min_df = parse_num(key, value)?,
            "split_fraction" => self.split.train_fraction = parse_num(key, value)?,
            "seed" => self.split.seed = parse_num(key, value)?,
            "stratified" => self.split.stratified = parse_bool(key, value)?,
            "classifier" => self.classifier = value.parse().map_err(|e| format!("classifier: {e}"))?,
            "nb_alpha" => self.train.nb_alpha = parse_num(key, value)?,
            "dt_max_depth" => {
                self.train.dt.max_depth = if value.eq_ignore_ascii_case("none") {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "dt_min_samples_split" => self.train.dt.min_samples_split = parse_num(key, value)?,
            "svm_c" => self.train.svm.c = parse_num(key, value)?,
            "svm_epochs" => self.train.svm.max_epochs = parse_num(key, value)?,
            "svm_tolerance" => self.train.svm.tolerance = parse_num(key, value)?,
            "out" => self.out = resolve(base, value),
            "corpus_name" => self.corpus_name = value.to_string(),
            "video_id" => self.video_id = Some(value.to_string()),
            "api_base_url" => self.api_base_url = Some(value.to_string()),
            "api_key" => self.api_key = Some(value.to_string()),
            "page_limit" => self.page_limit = parse_num(key, value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Parse file contents on top of the defaults, collecting every syntax
    /// and value error rather than stopping at the first.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigViolations> {
        let mut config = PipelineConfig::default();
        let mut problems = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                problems.push(format!("line {}: expected `key = value`", n + 1));
                continue;
            };
            if let Err(e) = config.set(key.trim(), value, base) {
                problems.push(format!("line {}: {e}", n + 1));
            }
        }
        if problems.is_empty() {
            Ok(config)
        } else {
            Err(ConfigViolations(problems))
        }
    }

    /// Range and existence checks. Returns every violation found.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.cleaning.violations();
        if !(self.label_threshold > 0.0 && self.label_threshold <= 1.0) {
            out.push("label_threshold must be in (0,1]".to_string());
        }
        if !(self.min_df > 0.0 && self.min_df <= 1.0) {
            out.push("min_df must be in (0,1]".to_string());
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            out.push("split_fraction must be in (0,1)".to_string());
        }
        if !(self.train.nb_alpha > 0.0 && self.train.nb_alpha.is_finite()) {
            out.push("nb_alpha must be positive".to_string());
        }
        if self.train.dt.max_depth == Some(0) {
            out.push("dt_max_depth must be a positive integer or `none`".to_string());
        }
        if self.train.dt.min_samples_split == 0 {
            out.push("dt_min_samples_split must be a positive integer".to_string());
        }
        if !(self.train.svm.c > 0.0 && self.train.svm.c.is_finite()) {
            out.push("svm_c must be positive".to_string());
        }
        if self.train.svm.max_epochs == 0 {
            out.push("svm_epochs must be a positive integer".to_string());
        }
        if !(self.train.svm.tolerance > 0.0) {
            out.push("svm_tolerance must be positive".to_string());
        }
        let paths = [
            ("input", &self.input),
            ("lexicon", &self.lexicon),
            ("emoji_lexicon", &self.emoji_lexicon),
            ("stopwords", &self.stopwords),
            ("lemma_table", &self.lemma_table),
        ];
        for (key, path) in paths {
            if let Some(p) = path {
                if !p.is_file() {
                    out.push(format!("{key}: file {} does not exist", p.display()));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ConfigViolations> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ConfigViolations(v))
        }
    }

    pub fn dt(&self) -> &DtConfig {
        &self.train.dt
    }

    pub fn svm(&self) -> &SvmConfig {
        &self.train.svm
    }
}

/// Read, parse and validate a config file.
pub fn load_config(path: &Path) -> crate::Result<PipelineConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(PipelineConfig::parse(&text, base)?)
}

/// Every violation in the file at `path`, or `Ok` if there are none.
/// Only an unreadable file is an `Err` of a different kind.
pub fn validate_config(path: &Path) -> crate::Result<PipelineConfig> {
    let config = load_config(path)?;
    config.validate()?;
    Ok(config)
}
