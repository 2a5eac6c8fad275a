use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use coderead_core::analytics::{ReportFormat, ScoreField};
use coderead_core::{FeatureSelection, Language};

/// Code readability features, classifier and corpus comparison.
#[derive(Debug, Parser)]
#[command(name = "coderead", version, about, propagate_version = true)]
pub struct Cli {
    /// TOML config file; command-line flags take precedence over it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for fold assignment and selection
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,

    /// Worker threads for featurization and scoring (0 = all cores)
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub jobs: usize,

    /// WordNet dictionary directory (bundled word list when absent)
    #[arg(long, global = true, value_name = "DIR")]
    pub dictionary: Option<PathBuf>,

    /// Increase log detail (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the 61-column feature matrix of a directory or manifest
    Featurize(FeaturizeArgs),
    /// Fit a model on a labeled manifest
    Train(TrainArgs),
    /// Cross-validate the classifier on a labeled manifest
    Evaluate(EvaluateArgs),
    /// Score a corpus with a trained model
    Score(ScoreArgs),
    /// Paired comparison of two score tables
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// Directory of source files or an id,path,language[,label] manifest
    #[arg(long = "in", value_name = "DIR|MANIFEST")]
    pub input: PathBuf,

    /// Language for every file (python, java, cuda, generic); default from extension
    #[arg(long, value_name = "LANG")]
    pub lang: Option<Language>,

    /// Output feature matrix CSV
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Write rows for readable files even when others fail (exit status still reports failure)
    #[arg(long)]
    pub keep_going: bool,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Labeled manifest with columns id,path,language,label
    #[arg(long, value_name = "MANIFEST")]
    pub data: PathBuf,

    /// Feature family: tf, bwf, pf, df or all
    #[arg(long, value_name = "FAMILY", default_value = "all")]
    pub family: String,

    /// L2 penalty on the mean-loss scale
    #[arg(long, value_name = "X")]
    pub lambda: Option<f64>,

    /// Maximum number of selected features (default: family size)
    #[arg(long, value_name = "K")]
    pub kmax: Option<usize>,

    /// Folds of the inner selection cross-validation
    #[arg(long, value_name = "K")]
    pub inner_folds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Output model JSON
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Outer cross-validation folds
    #[arg(long, value_name = "K")]
    pub folds: Option<usize>,

    /// Output report JSON (the table always goes to stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Trained model JSON
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,

    /// Directory of source files or an id,path,language[,label] manifest
    #[arg(long = "in", value_name = "DIR|MANIFEST")]
    pub input: PathBuf,

    /// Language for every file; default from extension
    #[arg(long, value_name = "LANG")]
    pub lang: Option<Language>,

    /// Output score table CSV (id,linear_score,probability)
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Score table of corpus A
    #[arg(long, value_name = "FILE")]
    pub a: PathBuf,

    /// Score table of corpus B
    #[arg(long, value_name = "FILE")]
    pub b: PathBuf,

    /// Column that pairs rows of the two tables
    #[arg(long, value_name = "COLUMN", default_value = "id")]
    pub join: String,

    /// Score column to compare: linear or probability
    #[arg(long, value_name = "FIELD", default_value = "linear")]
    pub field: ScoreField,

    /// Row label in the report (default: the two file stems)
    #[arg(long, value_name = "TEXT")]
    pub label: Option<String>,

    /// Report format: table, json or csv
    #[arg(long, value_name = "FORMAT", default_value = "table")]
    pub format: ReportFormat,

    /// Output file (stdout when absent)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Comma-separated families, e.g. `tf,bwf,all`.
pub fn parse_families(text: &str) -> Result<Vec<FeatureSelection>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let f: FeatureSelection = part.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err("no feature family given".into());
    }
    Ok(out)
}
