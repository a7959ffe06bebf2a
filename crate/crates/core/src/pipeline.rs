//! Stage runners. Each stage reads its predecessor's artifact from the output
//! directory and writes its own; nothing carries over in memory, so running
//! the stages one by one gives the same files as [`run_pipeline`].

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cleaning::{clean_comments, CleanComment, CleaningStats};
use crate::config::PipelineConfig;
use crate::corpus::{fetch_comments, parse_dump, FetchConfig, UreqTransport};
use crate::eval::{self, ClassificationReport, ConfusionMatrix};
use crate::features::{DocTermMatrix, Lemmatizer, Preprocessor, StopList, Vocabulary};
use crate::labeling::{build_dataset, summary_table, CorpusSummaryRow, Label, LabeledDataset};
use crate::models::{self, split, ClassifierKind, Classifier, Dataset, ModelEnvelope, Split};
use crate::sentiment::{Analyzer, Lexicon, RuleConstants};
use crate::{Error, Result};

pub const DUMP: &str = "dump.json";
pub const CLEAN: &str = "clean.json";
pub const CLEANING_STATS: &str = "cleaning_stats.json";
pub const LABELED: &str = "labeled.json";
pub const LABELED_CSV: &str = "labeled.csv";
pub const FEATURES: &str = "features.json";
pub const VOCABULARY: &str = "vocabulary.txt";
pub const MATRIX: &str = "matrix.csv";
pub const SPLIT: &str = "split.json";
pub const REPORT_MD: &str = "report.md";
pub const REPORT_JSON: &str = "report.json";

pub fn model_file(kind: ClassifierKind) -> String {
    format!("model_{}.json", kind.id())
}

pub fn eval_file(kind: ClassifierKind) -> String {
    format!("eval_{}.json", kind.id())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Clean,
    Label,
    Featurize,
    Train,
    Evaluate,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Clean,
        Stage::Label,
        Stage::Featurize,
        Stage::Train,
        Stage::Evaluate,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Clean => "clean",
            Stage::Label => "label",
            Stage::Featurize => "featurize",
            Stage::Train => "train",
            Stage::Evaluate => "evaluate",
            Stage::Report => "report",
        }
    }
}

/// Feature artifact: the matrix plus the label of each row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSet {
    pub vocabulary: Vocabulary,
    pub labels: Vec<Label>,
    pub rows: Vec<Vec<u32>>,
}

impl FeatureSet {
    pub fn dataset(&self) -> Result<Dataset> {
        Ok(Dataset::new(self.rows.clone(), self.labels.clone(), self.vocabulary.len())?)
    }
}

/// Per-classifier evaluation artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub classifier: ClassifierKind,
    pub confusion: ConfusionMatrix,
    pub report: ClassificationReport,
}

/// What a stage wrote, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutput {
    pub stage: Stage,
    pub files: Vec<String>,
    pub summary: String,
}

struct Workspace<'a> {
    out: &'a Path,
    files: Vec<String>,
}

impl<'a> Workspace<'a> {
    fn new(out: &'a Path) -> Result<Self> {
        fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        Ok(Workspace { out, files: Vec::new() })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("artifacts always serialize");
        text.push('\n');
        self.write(name, text)
    }

    fn read(&self, name: &str, producer: Stage) -> Result<String> {
        let path = self.path(name);
        if !path.is_file() {
            return Err(Error::MissingArtifact {
                path,
                stage: producer.name(),
            });
        }
        fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
    }

    fn read_json<T: DeserializeOwned>(&self, name: &str, producer: Stage) -> Result<T> {
        let text = self.read(name, producer)?;
        serde_json::from_str(&text).map_err(|e| Error::Artifact {
            path: self.path(name),
            message: e.to_string(),
        })
    }

    fn finish(self, stage: Stage, summary: String) -> StageOutput {
        StageOutput {
            stage,
            files: self.files,
            summary,
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn load_lexicon(config: &PipelineConfig) -> Result<Lexicon> {
    if config.lexicon.is_none() && config.emoji_lexicon.is_none() {
        return Ok(Lexicon::bundled().clone());
    }
    let lexicon = match &config.lexicon {
        Some(p) => read_file(p)?,
        None => crate::sentiment::BUNDLED_LEXICON.as_bytes().to_vec(),
    };
    let emoji = match &config.emoji_lexicon {
        Some(p) => read_file(p)?,
        None => crate::sentiment::BUNDLED_EMOJI.as_bytes().to_vec(),
    };
    Ok(Lexicon::load(&lexicon, Some(&emoji))?)
}

pub fn load_preprocessor(config: &PipelineConfig) -> Result<Preprocessor> {
    let stoplist = match &config.stopwords {
        Some(p) => StopList::from_lines(&String::from_utf8_lossy(&read_file(p)?)),
        None => StopList::bundled(),
    };
    let lemmatizer = match &config.lemma_table {
        Some(p) => Lemmatizer::from_tsv(&String::from_utf8_lossy(&read_file(p)?)),
        None => Lemmatizer::bundled(),
    };
    Ok(Preprocessor::new(stoplist, lemmatizer))
}

pub fn ingest(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let mut dump = if let Some(input) = &config.input {
        parse_dump(&read_file(input)?, config.format)?
    } else if let Some(video) = &config.video_id {
        let mut fetch = match &config.api_key {
            Some(key) => FetchConfig::new(key.clone()),
            None => FetchConfig::from_env().ok_or(crate::corpus::FetchError::MissingCredentials)?,
        };
        if let Some(url) = &config.api_base_url {
            fetch.base_url = url.clone();
        }
        fetch_comments(UreqTransport::default(), fetch, video, config.page_limit)?
    } else {
        return Err(Error::Usage("ingest needs --input or --video-id".to_string()));
    };
    if !config.include_replies {
        dump.comments.retain(|c| !c.is_reply);
    }
    let summary = format!("{} comments", dump.len());
    let mut json = dump.to_json();
    json.push('\n');
    ws.write(DUMP, json)?;
    Ok(ws.finish(Stage::Ingest, summary))
}

pub fn clean(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let text = ws.read(DUMP, Stage::Ingest)?;
    let dump = parse_dump(text.as_bytes(), crate::corpus::DumpFormat::Json)?;
    let (comments, stats) = clean_comments(&dump.comments, &config.cleaning);
    ws.write_json(CLEAN, &comments)?;
    ws.write_json(CLEANING_STATS, &stats)?;
    let summary = format!("{} of {} comments kept", stats.output_count, stats.input_count);
    Ok(ws.finish(Stage::Clean, summary))
}

pub fn label(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let comments: Vec<CleanComment> = ws.read_json(CLEAN, Stage::Clean)?;
    let lexicon = load_lexicon(config)?;
    let analyzer = Analyzer::new(&lexicon, RuleConstants::default());
    let scored: Vec<_> = comments
        .into_iter()
        .map(|c| {
            let s = analyzer.score(&c.text);
            (c, s)
        })
        .collect();
    let dataset = build_dataset(&scored, config.label_threshold)?;
    ws.write_json(LABELED, &dataset)?;
    ws.write(LABELED_CSV, dataset.to_csv())?;
    let c = dataset.counts;
    let summary = format!(
        "{} positive, {} negative, {} neutral dropped",
        c.positive, c.negative, c.neutral_dropped
    );
    Ok(ws.finish(Stage::Label, summary))
}

pub fn featurize(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let dataset: LabeledDataset = ws.read_json(LABELED, Stage::Label)?;
    let pre = load_preprocessor(config)?;
    let docs: Vec<Vec<String>> = dataset.items.iter().map(|i| pre.process(&i.text)).collect();
    let vocabulary = Vocabulary::fit(&docs, config.min_df)?;
    let matrix = DocTermMatrix::build(&docs, vocabulary);
    ws.write(VOCABULARY, matrix.vocabulary.legend())?;
    ws.write(MATRIX, matrix.to_triplets_csv())?;
    let summary = format!("{} documents x {} terms", matrix.n_rows(), matrix.n_cols());
    let features = FeatureSet {
        labels: dataset.labels(),
        rows: matrix.rows,
        vocabulary: matrix.vocabulary,
    };
    ws.write_json(FEATURES, &features)?;
    Ok(ws.finish(Stage::Featurize, summary))
}

fn read_features(ws: &Workspace) -> Result<FeatureSet> {
    let mut f: FeatureSet = ws.read_json(FEATURES, Stage::Featurize)?;
    f.vocabulary = f.vocabulary.reindex();
    Ok(f)
}

pub fn train(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let features = read_features(&ws)?;
    let data = features.dataset()?;
    let partition = split(&data, &config.split)?;
    ws.write_json(SPLIT, &partition)?;
    let train_set = data.subset(&partition.train);
    let hash = features.vocabulary.hash();
    for kind in config.classifier.kinds() {
        let model = models::train(kind, &train_set, &config.train)?;
        ws.write(&model_file(kind), ModelEnvelope::new(model, hash.clone()).to_json() + "\n")?;
    }
    let summary = format!("{} train / {} test rows", partition.train.len(), partition.test.len());
    Ok(ws.finish(Stage::Train, summary))
}

pub fn evaluate(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let features = read_features(&ws)?;
    let partition: Split = ws.read_json(SPLIT, Stage::Train)?;
    let data = features.dataset()?;
    let test = data.subset(&partition.test);
    let hash = features.vocabulary.hash();
    let mut lines = Vec::new();
    for kind in config.classifier.kinds() {
        let name = model_file(kind);
        let env = ModelEnvelope::from_json(&ws.read(&name, Stage::Train)?)?;
        if env.vocabulary_hash != hash {
            return Err(Error::Artifact {
                path: ws.path(&name),
                message: "model was trained on a different vocabulary".to_string(),
            });
        }
        let predictions = env.model.predict_all(&test.rows)?;
        let confusion = eval::confusion(&predictions, &test.labels)?;
        let report = eval::report(&confusion)?;
        lines.push(format!("{} accuracy {:.2}", kind.display_name(), report.accuracy));
        ws.write_json(
            &eval_file(kind),
            &Evaluation {
                classifier: kind,
                confusion,
                report,
            },
        )?;
    }
    Ok(ws.finish(Stage::Evaluate, lines.join(", ")))
}

pub fn report(config: &PipelineConfig) -> Result<StageOutput> {
    let mut ws = Workspace::new(&config.out)?;
    let stats: CleaningStats = ws.read_json(CLEANING_STATS, Stage::Clean)?;
    let dataset: LabeledDataset = ws.read_json(LABELED, Stage::Label)?;
    let mut evals = Vec::new();
    for kind in config.classifier.kinds() {
        evals.push(ws.read_json::<Evaluation>(&eval_file(kind), Stage::Evaluate)?);
    }

    let mut md = format!("# Sentiment report: {}\n\n", config.corpus_name);
    md.push_str("## Cleaning\n\n| Step | Comments |\n|---|---:|\n");
    for (step, n) in [
        ("input", stats.input_count),
        ("removed: empty", stats.removed_empty),
        ("removed: non-English", stats.removed_non_english),
        ("removed: numbers only", stats.removed_numeric_only),
        ("removed: mostly capitals", stats.removed_caps),
        ("removed: duplicates", stats.removed_duplicates),
        ("kept", stats.output_count),
    ] {
        md.push_str(&format!("| {step} | {n} |\n"));
    }
    md.push_str(&format!(
        "\n## Labeled comments\n\n{}\nNeutral comments dropped: {}\n",
        summary_table(&[CorpusSummaryRow::new(&config.corpus_name, &dataset.counts)]),
        dataset.counts.neutral_dropped
    ));
    md.push_str("\n## Confusion matrices\n");
    for e in &evals {
        md.push('\n');
        md.push_str(&e.confusion.to_markdown(&format!("Confusion Matrix of {}", e.classifier.display_name())));
    }
    let rows: Vec<(String, ClassificationReport)> = evals
        .iter()
        .map(|e| (e.classifier.display_name().to_string(), e.report))
        .collect();
    md.push_str(&format!(
        "\n## Classification report ({})\n\n{}",
        config.corpus_name,
        eval::report_table(&rows)
    ));
    let by_name: BTreeMap<String, ClassificationReport> = rows.into_iter().collect();
    let ranking = eval::compare_reports(&by_name);
    if ranking.len() >= 2 {
        md.push_str(&format!("\n## Ranking\n\n{}", eval::ranking_table(&ranking)));
    }

    let json = serde_json::json!({
        "corpus": config.corpus_name,
        "cleaning": stats,
        "labels": dataset.counts,
        "classifiers": evals
            .iter()
            .map(|e| (e.classifier.id().to_string(), e.report.to_json(&e.confusion)))
            .collect::<BTreeMap<_, _>>(),
        "ranking": ranking.iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
    });
    ws.write(REPORT_MD, &md)?;
    ws.write_json(REPORT_JSON, &json)?;
    let summary = match ranking.first() {
        Some(top) if ranking.len() >= 2 => format!("best: {}", top.name),
        _ => "report written".to_string(),
    };
    Ok(ws.finish(Stage::Report, summary))
}

pub fn run_stage(stage: Stage, config: &PipelineConfig) -> Result<StageOutput> {
    match stage {
        Stage::Ingest => ingest(config),
        Stage::Clean => clean(config),
        Stage::Label => label(config),
        Stage::Featurize => featurize(config),
        Stage::Train => train(config),
        Stage::Evaluate => evaluate(config),
        Stage::Report => report(config),
    }
}

/// All stages in order.
pub fn run_pipeline(config: &PipelineConfig) -> Result<Vec<StageOutput>> {
    Stage::ALL.iter().map(|&s| run_stage(s, config)).collect()
}

/// The classification-report row for a published confusion matrix.
pub fn report_from_confusion(name: &str, matrix: &ConfusionMatrix) -> Result<String> {
    let report = eval::report(matrix)?;
    Ok(format!(
        "{}\n{}",
        matrix.to_markdown(&format!("Confusion Matrix of {name}")),
        eval::report_table(&[(name.to_string(), report)])
    ))
}

