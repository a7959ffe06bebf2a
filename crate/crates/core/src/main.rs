use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use unbox_core::config::{load_config, PipelineConfig};
use unbox_core::eval::{self, ConfusionMatrix};
use unbox_core::pipeline::{self, Stage, StageOutput};
use unbox_core::{Error, Result};

/// Sentiment pipeline for product-review comments.
#[derive(Parser, Debug)]
#[command(name = "unbox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read a comment dump (or fetch one) into dump.json.
    Ingest,
    /// Filter dump.json into clean.json and cleaning_stats.json.
    Clean,
    /// Score and threshold clean.json into labeled.json/labeled.csv.
    Label,
    /// Build the vocabulary and document-term matrix.
    Featurize,
    /// Split the data and train the selected classifiers.
    Train,
    /// Score trained models on the held-out rows.
    Evaluate,
    /// Write report.md and report.json, or print the report for a given matrix.
    Report(ReportArgs),
    /// Run every stage in order.
    Pipeline,
    /// Check a config file and list every problem in it.
    ValidateConfig {
        path: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Confusion matrix as `tn=..,fp=..,fn=..,tp=..`; skips the artifacts.
    #[arg(long, value_name = "SPEC")]
    from_confusion: Option<String>,
    /// Row name used with --from-confusion.
    #[arg(long, default_value = "Classifier")]
    name: String,
    /// Print JSON instead of markdown (with --from-confusion).
    #[arg(long)]
    json: bool,
}

/// Flags that override config-file keys of the same name.
#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long, global = true)]
    lexicon: Option<String>,
    #[arg(long, global = true)]
    emoji_lexicon: Option<String>,
    #[arg(long, global = true)]
    stopwords: Option<String>,
    #[arg(long, global = true)]
    lemma_table: Option<String>,
    #[arg(long, global = true)]
    min_df: Option<String>,
    #[arg(long, global = true)]
    label_threshold: Option<String>,
    #[arg(long, global = true)]
    split_fraction: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    stratified: bool,
    #[arg(long, global = true, value_parser = ["nb", "dt", "svm", "all"])]
    classifier: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    video_id: Option<String>,
    /// Any other config key, as KEY=VALUE. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(String, String)> {
        let named = [
            ("input", &self.input),
            ("format", &self.format),
            ("lexicon", &self.lexicon),
            ("emoji_lexicon", &self.emoji_lexicon),
            ("stopwords", &self.stopwords),
            ("lemma_table", &self.lemma_table),
            ("min_df", &self.min_df),
            ("label_threshold", &self.label_threshold),
            ("split_fraction", &self.split_fraction),
            ("seed", &self.seed),
            ("classifier", &self.classifier),
            ("out", &self.out),
            ("video_id", &self.video_id),
        ];
        let mut out: Vec<(String, String)> = self
            .set
            .iter()
            .map(|kv| match kv.split_once('=') {
                Some((k, v)) => (k.trim().to_string(), v.to_string()),
                None => (kv.clone(), String::new()),
            })
            .collect();
        out.extend(
            named
                .into_iter()
                .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))),
        );
        if self.stratified {
            out.push(("stratified".to_string(), "true".to_string()));
        }
        out
    }
}

fn build_config(overrides: &Overrides) -> Result<PipelineConfig> {
    let mut config = match &overrides.config {
        Some(path) => load_config(path)?,
        None => PipelineConfig::default(),
    };
    let mut problems = Vec::new();
    for (key, value) in overrides.pairs() {
        if let Err(e) = config.set(&key, &value, Path::new(".")) {
            problems.push(format!("--{}: {e}", key.replace('_', "-")));
        }
    }
    problems.extend(config.violations());
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(unbox_core::config::ConfigViolations(problems).into())
    }
}

fn print_outputs(outputs: &[StageOutput]) {
    for o in outputs {
        println!("{:<9} {} [{}]", o.stage.name(), o.summary, o.files.join(", "));
    }
}

fn report_from_confusion(args: &ReportArgs, spec: &str) -> Result<()> {
    let matrix: ConfusionMatrix = spec
        .parse()
        .map_err(|e: eval::EvalError| Error::Usage(e.to_string()))?;
    if args.json {
        let report = eval::report(&matrix)?;
        println!("{}", serde_json::to_string_pretty(&report.to_json(&matrix)).expect("serializable"));
    } else {
        print!("{}", pipeline::report_from_confusion(&args.name, &matrix)?);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stage = match &cli.command {
        Command::ValidateConfig { path } => {
            let config = load_config(path)?;
            config.validate()?;
            println!("{}: ok", path.display());
            return Ok(());
        }
        Command::Report(args) => {
            if let Some(spec) = &args.from_confusion {
                return report_from_confusion(args, spec);
            }
            Stage::Report
        }
        Command::Pipeline => {
            let config = build_config(&cli.overrides)?;
            print_outputs(&pipeline::run_pipeline(&config)?);
            return Ok(());
        }
        Command::Ingest => Stage::Ingest,
        Command::Clean => Stage::Clean,
        Command::Label => Stage::Label,
        Command::Featurize => Stage::Featurize,
        Command::Train => Stage::Train,
        Command::Evaluate => Stage::Evaluate,
    };
    let config = build_config(&cli.overrides)?;
    print_outputs(&[pipeline::run_stage(stage, &config)?]);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
