mod args;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use coderead_core::analytics::{paired_compare, render_report, score_corpus, ReportFormat, ScoreTable};
use coderead_core::config::{ConfigFile, ResolvedConfig};
use coderead_core::corpus::{list_directory, list_manifest, LabeledDataset, Language, SourceItem};
use coderead_core::model::{evaluate, train, ReadabilityModel};
use coderead_core::vectorizer::write_matrix;
use coderead_core::{Dictionary, FeatureVector, Featurizer};
use serde_json::json;

use args::{parse_families, Cli, Command, CompareArgs, EvaluateArgs, FeaturizeArgs, ModelArgs, ScoreArgs, TrainArgs};

/// Failure classes mapped to exit statuses.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Data(e) | Failure::Internal(e) => e,
        }
    }
}

type Outcome<T> = Result<T, Failure>;

trait Classify<T> {
    fn usage(self) -> Outcome<T>;
    fn data(self) -> Outcome<T>;
    fn internal(self) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Outcome<T> {
        self.map_err(|e| Failure::Usage(e.into()))
    }
    fn data(self) -> Outcome<T> {
        self.map_err(|e| Failure::Data(e.into()))
    }
    fn internal(self) -> Outcome<T> {
        self.map_err(|e| Failure::Internal(e.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("CODEREAD_LOG")
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.code())
        }
    }
}

fn resolve_config(cli: &Cli) -> Outcome<ResolvedConfig> {
    let mut config = ResolvedConfig::default();
    if let Some(path) = &cli.config {
        config = ConfigFile::load(path).usage()?.apply(config);
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(dir) = &cli.dictionary {
        config.dictionary = Some(dir.clone());
    }
    match &cli.command {
        Command::Train(TrainArgs { model, .. }) => apply_model_flags(&mut config, model),
        Command::Evaluate(EvaluateArgs { model, folds, .. }) => {
            apply_model_flags(&mut config, model);
            if let Some(k) = folds {
                config.folds = *k;
            }
        }
        _ => {}
    }
    config.model.seed = config.seed;
    config.validate().usage()?;
    Ok(config)
}

fn apply_model_flags(config: &mut ResolvedConfig, args: &ModelArgs) {
    if let Some(l) = args.lambda {
        config.model.lambda_l2 = l;
    }
    if let Some(k) = args.kmax {
        config.model.k_max = Some(k);
    }
    if let Some(k) = args.inner_folds {
        config.model.inner_folds = k;
    }
}

fn run(cli: Cli) -> Outcome<()> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .internal()?;
    }
    let config = resolve_config(&cli)?;
    log::info!("resolved config: {}", serde_json::to_string(&config).unwrap_or_default());
    match &cli.command {
        Command::Featurize(a) => featurize(a, &config),
        Command::Train(a) => train_cmd(a, &config),
        Command::Evaluate(a) => evaluate_cmd(a, &config),
        Command::Score(a) => score(a, &config),
        Command::Compare(a) => compare(a, &config),
    }
}

fn featurizer(config: &ResolvedConfig) -> Outcome<Featurizer> {
    let dictionary = Dictionary::open(config.dictionary.as_deref()).data()?;
    log::info!("dictionary: {}", dictionary.describe());
    Ok(Featurizer::new(dictionary, config.features))
}

fn list_sources(input: &Path, lang: Option<Language>) -> Outcome<Vec<SourceItem>> {
    if !input.exists() {
        return Err(Failure::Data(anyhow!("input {} does not exist", input.display())));
    }
    let mut items = if input.is_dir() {
        list_directory(input, lang).data()?
    } else {
        list_manifest(input).data()?
    };
    if let Some(l) = lang {
        for item in &mut items {
            item.language = l;
        }
    }
    if items.is_empty() {
        log::warn!("no source files found in {}", input.display());
    }
    Ok(items)
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome<()> {
    fs::write(path, bytes)
        .with_context(|| format!("cannot write {}", path.display()))
        .internal()
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json value serializes") + "\n"
}

fn featurize(args: &FeaturizeArgs, config: &ResolvedConfig) -> Outcome<()> {
    let items = list_sources(&args.input, args.lang)?;
    let mut snippets = Vec::with_capacity(items.len());
    let mut failures = 0usize;
    for item in &items {
        match item.load() {
            Ok(s) => snippets.push(s),
            Err(e) => {
                failures += 1;
                eprintln!("{}: {e}", item.path.display());
                if !args.keep_going {
                    return Err(Failure::Data(anyhow!("cannot read {} (use --keep-going to skip)", item.id)));
                }
            }
        }
    }
    let vectors = featurizer(config)?.featurize_all(&snippets);
    let rows: Vec<(String, _)> = snippets.iter().map(|s| s.id.clone()).zip(vectors).collect();
    let mut buf = Vec::new();
    write_matrix(&mut buf, &rows).internal()?;
    write_file(&args.out, &buf)?;
    log::info!("wrote {} rows to {}", rows.len(), args.out.display());
    if failures > 0 {
        return Err(Failure::Data(anyhow!("{failures} of {} files could not be read", items.len())));
    }
    Ok(())
}

fn load_dataset(args: &ModelArgs, featurizer: &Featurizer) -> Outcome<(Vec<FeatureVector>, Vec<u8>)> {
    let dataset = LabeledDataset::load(&args.data).data()?;
    let snippets: Vec<_> = dataset.snippets().cloned().collect();
    Ok((featurizer.featurize_all(&snippets), dataset.labels()))
}

fn train_cmd(args: &TrainArgs, config: &ResolvedConfig) -> Outcome<()> {
    let families = parse_families(&args.model.family).map_err(|e| Failure::Usage(anyhow!(e)))?;
    let [family] = families[..] else {
        return Err(Failure::Usage(anyhow!("train takes exactly one family")));
    };
    let featurizer = featurizer(config)?;
    let (vectors, labels) = load_dataset(&args.model, &featurizer)?;
    let mut model = train(&vectors, &labels, family, &config.model).data()?;
    let notes = &mut model.provenance.notes;
    notes.insert("config".into(), serde_json::to_string(config).internal()?);
    notes.insert("dataset".into(), args.model.data.display().to_string());
    notes.insert("dictionary".into(), featurizer.dictionary.describe());
    write_file(&args.out, (model.to_json() + "\n").as_bytes())?;
    println!(
        "trained {} model on {} snippets: {} features selected",
        family.label(),
        labels.len(),
        model.selected.len()
    );
    Ok(())
}

fn evaluate_cmd(args: &EvaluateArgs, config: &ResolvedConfig) -> Outcome<()> {
    let families = parse_families(&args.model.family).map_err(|e| Failure::Usage(anyhow!(e)))?;
    let (vectors, labels) = load_dataset(&args.model, &featurizer(config)?)?;
    let report = evaluate(&vectors, &labels, &families, config.folds, &config.model).data()?;
    print!("{}", report.render_table());
    if let Some(out) = &args.out {
        let doc = json!({ "config": config, "report": report });
        write_file(out, pretty(&doc).as_bytes())?;
    }
    Ok(())
}

fn score(args: &ScoreArgs, config: &ResolvedConfig) -> Outcome<()> {
    let model = ReadabilityModel::load(&args.model).data()?;
    if let Some(trained) = model.provenance.notes.get("config") {
        if let Ok(trained) = serde_json::from_str::<ResolvedConfig>(trained) {
            if trained.features != config.features {
                log::warn!("feature settings differ from those the model was trained with");
            }
        }
    }
    let items = list_sources(&args.input, args.lang)?;
    let snippets = items.iter().map(|i| i.load()).collect::<Result<Vec<_>, _>>().data()?;
    let mut table = score_corpus(&model, &featurizer(config)?, &snippets).data()?;
    table.model_ref = args.model.display().to_string();
    let mut buf = Vec::new();
    table.write_csv(&mut buf).internal()?;
    write_file(&args.out, &buf)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn compare(args: &CompareArgs, config: &ResolvedConfig) -> Outcome<()> {
    if args.join != "id" {
        return Err(Failure::Usage(anyhow!("only the `id` column can be used as join key, got `{}`", args.join)));
    }
    let read = |path: &Path| -> Outcome<ScoreTable> {
        let file = fs::File::open(path)
            .with_context(|| format!("cannot open {}", path.display()))
            .data()?;
        ScoreTable::read_csv(file, &stem(path))
            .with_context(|| path.display().to_string())
            .data()
    };
    let (a, b) = (read(&args.a)?, read(&args.b)?);
    let label = args.label.clone().unwrap_or_else(|| format!("{}/{}", stem(&args.a), stem(&args.b)));
    let report = paired_compare(&a, &b, args.field, &label).data()?;
    if report.no_nonzero_pairs {
        log::warn!("no nonzero pairs: every paired difference is zero");
    }
    let text = match args.format {
        ReportFormat::Json => pretty(&json!({ "config": config, "reports": [report] })),
        format => render_report(std::slice::from_ref(&report), format),
    };
    match &args.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()).internal(),
    }
}
