//! Command-line front end: `compare` scores one sentence pair, `bench` runs
//! a configured benchmark and `validate` checks asset files.
//!
//! Exit codes: 0 success, 2 usage or config error, 3 missing asset,
//! 4 malformed data.

pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use docsim::corpus::{load_corpus, DEFAULT_LSA_RANK, DEFAULT_WINDOW};
use docsim::datasets::{load_afs, load_mrpc, load_sick, AfsLayout};
use docsim::eval::{load_stopwords, run_benchmark, BenchError, Method, MethodKind, MethodSpec};
use docsim::sentsim::CombineWeights;
use docsim::taxonomy::Taxonomy;
use docsim::textprep::StopwordSet;
use docsim::vectorspace::EmbeddingTable;
use thiserror::Error;

use crate::config::{load_config, ConfigError};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISSING_ASSET: i32 = 3;
pub const EXIT_DATA: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{failed} of {checked} files failed validation")]
    Validation { failed: usize, checked: usize, code: i32 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Bench(e) if e.is_config() => EXIT_USAGE,
            CliError::Bench(e) if e.is_missing_asset() => EXIT_MISSING_ASSET,
            CliError::Bench(_) => EXIT_DATA,
            CliError::Output { .. } => 1,
            CliError::Validation { code, .. } => *code,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "docsim", version, about = "Sentence similarity measures and benchmark runner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score the similarity of two sentences
    Compare(CompareArgs),
    /// Run a benchmark described by a config file
    Bench(BenchArgs),
    /// Check taxonomy, embedding, corpus and dataset files without running
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Method kind: string, lin, lin+string, pmi, pmi+string, lsa,
    /// lsa+string, tfidf or embedding
    #[arg(long)]
    pub method: MethodKind,
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
    /// Embedding file; the two arguments are then sentence ids
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Corpus with one document per line (pmi, lsa and tfidf)
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Weight of the string measure in combined methods
    #[arg(long, value_name = "W_STRING")]
    pub weights: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = DEFAULT_LSA_RANK)]
    pub rank: usize,
    pub sentence1: String,
    pub sentence2: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Report prefix; writes PREFIX.md and PREFIX.csv. Without it (and
    /// without `out` in the config) the CSV report goes to stdout.
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Validate every file a benchmark config refers to
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub taxonomy: Vec<PathBuf>,
    #[arg(long)]
    pub embeddings: Vec<PathBuf>,
    #[arg(long)]
    pub corpus: Vec<PathBuf>,
    #[arg(long)]
    pub stopwords: Vec<PathBuf>,
    #[arg(long)]
    pub mrpc: Vec<PathBuf>,
    /// AFS file in the default `score,s1,s2` layout without header
    #[arg(long)]
    pub afs: Vec<PathBuf>,
    #[arg(long)]
    pub sick: Vec<PathBuf>,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Compare(args) => cmd_compare(&args, stdout),
        Command::Bench(args) => cmd_bench(&args, stdout),
        Command::Validate(args) => cmd_validate(&args, stdout),
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Output { path: "<stdout>".into(), source })
}

pub fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut spec = MethodSpec::new(args.method.name(), args.method);
    spec.taxonomy = args.taxonomy.clone();
    spec.embeddings = args.embeddings.clone();
    spec.corpus = args.corpus.clone();
    spec.window = args.window;
    spec.rank = args.rank;
    if spec.window == 0 || spec.rank == 0 {
        return Err(CliError::Usage("--window and --rank must be positive".into()));
    }
    if let Some(w) = args.weights {
        let w = CombineWeights::from_string_weight(w).map_err(|e| CliError::Usage(format!("--weights: {e}")))?;
        spec.weights = Some(w);
    }
    let stopwords = load_stopwords(args.stopwords.as_deref())?;
    let method = Method::build(&spec, &stopwords, args.seed)?;
    let score = method.compare(&args.sentence1, &args.sentence2, &stopwords)?;
    emit(stdout, &format!("{score:.6}\n"))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Output { path: path.display().to_string(), source })
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.bench.seed = seed;
    }
    let table = run_benchmark(&cfg.bench)?;
    match args.out.as_ref().or(cfg.out.as_ref()) {
        Some(prefix) => {
            let with_ext = |ext: &str| {
                let mut s = prefix.clone().into_os_string();
                s.push(ext);
                PathBuf::from(s)
            };
            let (md, csv) = (with_ext(".md"), with_ext(".csv"));
            write_file(&md, &table.to_markdown())?;
            write_file(&csv, &table.to_csv())?;
            log::info!("wrote {} and {}", md.display(), csv.display());
            Ok(())
        }
        None => emit(stdout, &table.to_csv()),
    }
}

enum Asset {
    Taxonomy,
    Embeddings,
    Corpus,
    Stopwords,
    Mrpc,
    Afs(AfsLayout),
    Sick,
}

impl Asset {
    fn label(&self) -> &'static str {
        match self {
            Asset::Taxonomy => "taxonomy",
            Asset::Embeddings => "embeddings",
            Asset::Corpus => "corpus",
            Asset::Stopwords => "stopwords",
            Asset::Mrpc => "mrpc",
            Asset::Afs(_) => "afs",
            Asset::Sick => "sick",
        }
    }

    /// Loads the file and summarizes it, or describes what is wrong.
    fn check(&self, path: &Path) -> Result<String, String> {
        let err = |e: &dyn std::fmt::Display| e.to_string();
        match self {
            Asset::Taxonomy => Taxonomy::load(path)
                .map(|t| format!("{} concepts, {} edges", t.len(), t.edge_count()))
                .map_err(|e| err(&e)),
            Asset::Embeddings => EmbeddingTable::load(path)
                .map(|t| format!("{} vectors of dimension {}", t.len(), t.dim()))
                .map_err(|e| err(&e)),
            Asset::Corpus => load_corpus(path, &StopwordSet::english())
                .map(|c| format!("{} documents", c.len()))
                .map_err(|e| err(&e)),
            Asset::Stopwords => StopwordSet::load(path)
                .map(|s| format!("{} stop words", s.len()))
                .map_err(|e| err(&e)),
            Asset::Mrpc => load_mrpc(path)
                .map(|r| format!("{} pairs", r.len()))
                .map_err(|e| err(&e)),
            Asset::Afs(layout) => load_afs(path, layout)
                .map(|r| format!("{} pairs", r.len()))
                .map_err(|e| err(&e)),
            Asset::Sick => load_sick(path)
                .map(|v| format!("{} pairs", v.relatedness.len()))
                .map_err(|e| err(&e)),
        }
    }
}

pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut items: Vec<(Asset, PathBuf)> = Vec::new();
    if let Some(path) = &args.config {
        let cfg = load_config(path)?.bench;
        let d = cfg.datasets;
        items.extend(cfg.stopwords.map(|p| (Asset::Stopwords, p)));
        items.extend(d.mrpc.into_iter().chain(d.mrpc_test).map(|p| (Asset::Mrpc, p)));
        items.extend(d.afs.map(|p| (Asset::Afs(d.afs_layout.clone()), p)));
        items.extend(d.sick.map(|p| (Asset::Sick, p)));
        for m in cfg.methods {
            items.extend(m.taxonomy.map(|p| (Asset::Taxonomy, p)));
            items.extend(m.embeddings.map(|p| (Asset::Embeddings, p)));
            items.extend(m.corpus.map(|p| (Asset::Corpus, p)));
        }
    }
    type Flag<'a> = (&'a Vec<PathBuf>, fn() -> Asset);
    let flagged: [Flag; 7] = [
        (&args.taxonomy, || Asset::Taxonomy),
        (&args.embeddings, || Asset::Embeddings),
        (&args.corpus, || Asset::Corpus),
        (&args.stopwords, || Asset::Stopwords),
        (&args.mrpc, || Asset::Mrpc),
        (&args.afs, || Asset::Afs(AfsLayout::default())),
        (&args.sick, || Asset::Sick),
    ];
    for (paths, make) in flagged {
        items.extend(paths.iter().map(|p| (make(), p.clone())));
    }
    if items.is_empty() {
        return Err(CliError::Usage("nothing to validate; pass --config or asset flags".into()));
    }

    let mut failed = 0;
    let mut code = 0;
    let mut report = String::new();
    for (asset, path) in &items {
        let label = asset.label();
        if !path.exists() {
            failed += 1;
            code = code.max(EXIT_MISSING_ASSET);
            report.push_str(&format!("MISSING {label} {}\n", path.display()));
            continue;
        }
        match asset.check(path) {
            Ok(summary) => report.push_str(&format!("OK {label} {}: {summary}\n", path.display())),
            Err(e) => {
                failed += 1;
                code = code.max(EXIT_DATA);
                report.push_str(&format!("ERROR {label} {}: {e}\n", path.display()));
            }
        }
    }
    emit(stdout, &report)?;
    if failed > 0 {
        return Err(CliError::Validation { failed, checked: items.len(), code });
    }
    Ok(())
}
