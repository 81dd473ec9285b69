//! Benchmark runner: builds each configured method, scores the test split
//! of every configured task and fills one report row per method.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use super::metrics::{accuracy, pearson, spearman, MetricError};
use super::report::{Cell, Column, ReportRow, ReportTable};
use super::{calibrate_threshold, ScoredPair};
use crate::corpus::{
    build_cooccurrence, load_corpus, CorpusError, LsaModel, SvdOptions, DEFAULT_LSA_RANK, DEFAULT_WINDOW,
};
use crate::datasets::{
    load_afs, load_sick, parse_mrpc, split_dataset, AfsLayout, DatasetError, PairRecord, SplitSpec,
};
use crate::sentsim::{combined_similarity, CombineWeights, NoSimilarity, WordSimilarity};
use crate::taxonomy::{Taxonomy, TaxonomyError};
use crate::textprep::{preprocess, StopwordError, StopwordSet, TokenSequence};
use crate::vectorspace::{cosine, fit_tfidf, EmbeddingTable, TfIdfModel, VectorError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("method {method}: {asset} file {} not found", path.display())]
    MissingAsset {
        method: String,
        asset: &'static str,
        path: PathBuf,
    },
    #[error("method {method} of kind {kind} needs a {asset} file")]
    AssetNotConfigured {
        method: String,
        kind: MethodKind,
        asset: &'static str,
    },
    #[error("{}: {source}", path.display())]
    Taxonomy {
        path: PathBuf,
        #[source]
        source: TaxonomyError,
    },
    #[error("{}: {source}", path.display())]
    Corpus {
        path: PathBuf,
        #[source]
        source: CorpusError,
    },
    #[error("{}: {source}", path.display())]
    Vectors {
        path: PathBuf,
        #[source]
        source: VectorError,
    },
    #[error("{}: {source}", path.display())]
    Stopwords {
        path: PathBuf,
        #[source]
        source: StopwordError,
    },
    #[error("{}: {source}", path.display())]
    Dataset {
        path: PathBuf,
        #[source]
        source: DatasetError,
    },
    #[error("no embedding for sentence {0}")]
    MissingEmbedding(String),
    #[error(transparent)]
    Vector(#[from] VectorError),
}

impl BenchError {
    /// True for errors caused by an asset that is absent rather than broken.
    pub fn is_missing_asset(&self) -> bool {
        matches!(self, BenchError::MissingAsset { .. } | BenchError::AssetNotConfigured { .. })
    }

    pub fn is_config(&self) -> bool {
        matches!(self, BenchError::Config(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    String,
    Lin,
    LinString,
    Pmi,
    PmiString,
    Lsa,
    LsaString,
    TfIdf,
    Embedding,
}

impl MethodKind {
    pub const ALL: [MethodKind; 9] = [
        MethodKind::String,
        MethodKind::Lin,
        MethodKind::LinString,
        MethodKind::Pmi,
        MethodKind::PmiString,
        MethodKind::Lsa,
        MethodKind::LsaString,
        MethodKind::TfIdf,
        MethodKind::Embedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::String => "string",
            MethodKind::Lin => "lin",
            MethodKind::LinString => "lin+string",
            MethodKind::Pmi => "pmi",
            MethodKind::PmiString => "pmi+string",
            MethodKind::Lsa => "lsa",
            MethodKind::LsaString => "lsa+string",
            MethodKind::TfIdf => "tfidf",
            MethodKind::Embedding => "embedding",
        }
    }

    /// Weights for word-level methods: knowledge-only kinds ignore the
    /// string measure, string-only ignores the provider.
    fn default_weights(self) -> CombineWeights {
        match self {
            MethodKind::String => CombineWeights::string_only(),
            MethodKind::Lin | MethodKind::Pmi | MethodKind::Lsa => CombineWeights::knowledge_only(),
            _ => CombineWeights::default(),
        }
    }

    fn uses_weights(self) -> bool {
        matches!(self, MethodKind::LinString | MethodKind::PmiString | MethodKind::LsaString)
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_lowercase();
        MethodKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = MethodKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown method {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// One row of a benchmark: a method kind plus the assets it reads.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub name: String,
    pub kind: MethodKind,
    pub taxonomy: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    /// String-measure weight for combined kinds; `None` means 0.5.
    pub weights: Option<CombineWeights>,
    pub window: usize,
    pub rank: usize,
}

impl MethodSpec {
    pub fn new(name: impl Into<String>, kind: MethodKind) -> Self {
        MethodSpec {
            name: name.into(),
            kind,
            taxonomy: None,
            embeddings: None,
            corpus: None,
            weights: None,
            window: DEFAULT_WINDOW,
            rank: DEFAULT_LSA_RANK,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetPaths {
    /// MRPC pairs; split 60/20/20 unless `mrpc_test` is also given, in
    /// which case this file is the training set.
    pub mrpc: Option<PathBuf>,
    pub mrpc_test: Option<PathBuf>,
    pub afs: Option<PathBuf>,
    pub afs_layout: AfsLayout,
    pub sick: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub stopwords: Option<PathBuf>,
    pub datasets: DatasetPaths,
    pub methods: Vec<MethodSpec>,
}

enum Scorer {
    Words {
        provider: Box<dyn WordSimilarity + Send>,
        weights: CombineWeights,
    },
    TfIdf(Option<TfIdfModel>),
    Embedding(EmbeddingTable),
}

/// A method with its assets loaded, ready to score sentence pairs.
pub struct Method {
    name: String,
    kind: MethodKind,
    scorer: Scorer,
}

fn require<'a>(spec: &MethodSpec, path: &'a Option<PathBuf>, asset: &'static str) -> Result<&'a Path, BenchError> {
    let path = path.as_deref().ok_or_else(|| BenchError::AssetNotConfigured {
        method: spec.name.clone(),
        kind: spec.kind,
        asset,
    })?;
    check_exists(spec, path, asset)?;
    Ok(path)
}

fn check_exists(spec: &MethodSpec, path: &Path, asset: &'static str) -> Result<(), BenchError> {
    if !path.exists() {
        return Err(BenchError::MissingAsset {
            method: spec.name.clone(),
            asset,
            path: path.to_path_buf(),
        });
    }
    Ok(())
}

fn corpus_for(path: &Path, stopwords: &StopwordSet) -> Result<Vec<TokenSequence>, BenchError> {
    load_corpus(path, stopwords).map_err(|source| BenchError::Corpus { path: path.into(), source })
}

impl Method {
    /// Loads every asset the method needs. `seed` drives the LSA start
    /// vector.
    pub fn build(spec: &MethodSpec, stopwords: &StopwordSet, seed: u64) -> Result<Method, BenchError> {
        let weights = match spec.weights {
            Some(w) if spec.kind.uses_weights() => w,
            _ => spec.kind.default_weights(),
        };
        let words = |provider: Box<dyn WordSimilarity + Send>| Scorer::Words { provider, weights };
        let scorer = match spec.kind {
            MethodKind::String => words(Box::new(NoSimilarity)),
            MethodKind::Lin | MethodKind::LinString => {
                let path = require(spec, &spec.taxonomy, "taxonomy")?;
                let tax = Taxonomy::load(path).map_err(|source| BenchError::Taxonomy { path: path.into(), source })?;
                words(Box::new(tax))
            }
            MethodKind::Pmi | MethodKind::PmiString => {
                let path = require(spec, &spec.corpus, "corpus")?;
                let corpus = corpus_for(path, stopwords)?;
                let model = build_cooccurrence(&corpus, spec.window)
                    .map_err(|source| BenchError::Corpus { path: path.into(), source })?;
                words(Box::new(model))
            }
            MethodKind::Lsa | MethodKind::LsaString => {
                let path = require(spec, &spec.corpus, "corpus")?;
                let corpus = corpus_for(path, stopwords)?;
                let opts = SvdOptions { seed, ..SvdOptions::default() };
                let model = LsaModel::fit(&corpus, spec.rank, &opts)
                    .map_err(|source| BenchError::Corpus { path: path.into(), source })?;
                words(Box::new(model))
            }
            MethodKind::TfIdf => match &spec.corpus {
                Some(path) => {
                    check_exists(spec, path, "corpus")?;
                    let corpus = corpus_for(path, stopwords)?;
                    let model = fit_tfidf(&corpus).map_err(|source| BenchError::Vectors { path: path.clone(), source })?;
                    Scorer::TfIdf(Some(model))
                }
                None => Scorer::TfIdf(None),
            },
            MethodKind::Embedding => {
                let path = require(spec, &spec.embeddings, "embeddings")?;
                let table =
                    EmbeddingTable::load(path).map_err(|source| BenchError::Vectors { path: path.into(), source })?;
                Scorer::Embedding(table)
            }
        };
        Ok(Method { name: spec.name.clone(), kind: spec.kind, scorer })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MethodKind {
        self.kind
    }

    /// Scores two raw sentences. Embedding methods treat `a` and `b` as
    /// embedding ids; TF-IDF needs a corpus-fitted model.
    pub fn compare(&self, a: &str, b: &str, stopwords: &StopwordSet) -> Result<f64, BenchError> {
        match &self.scorer {
            Scorer::Words { provider, weights } => {
                Ok(words_score(provider.as_ref(), *weights, &preprocess(a, stopwords), &preprocess(b, stopwords)))
            }
            Scorer::TfIdf(Some(model)) => tfidf_score(model, a, b, stopwords),
            Scorer::TfIdf(None) => Err(BenchError::AssetNotConfigured {
                method: self.name.clone(),
                kind: self.kind,
                asset: "corpus",
            }),
            Scorer::Embedding(table) => embedding_score(table, a, b),
        }
    }

    /// Scores `records` in order. A TF-IDF method without its own corpus
    /// is fitted on the sentences of `fit_on`.
    pub fn score_records(
        &self,
        fit_on: &[PairRecord],
        records: &[PairRecord],
        stopwords: &StopwordSet,
    ) -> Result<Vec<f64>, BenchError> {
        match &self.scorer {
            Scorer::Words { provider, weights } => Ok(records
                .par_iter()
                .map(|r| {
                    words_score(provider.as_ref(), *weights, &preprocess(&r.s1, stopwords), &preprocess(&r.s2, stopwords))
                })
                .collect()),
            Scorer::TfIdf(model) => {
                let fitted;
                let model = match model {
                    Some(m) => m,
                    None => {
                        let docs: Vec<TokenSequence> = fit_on
                            .iter()
                            .flat_map(|r| [preprocess(&r.s1, stopwords), preprocess(&r.s2, stopwords)])
                            .collect();
                        fitted = fit_tfidf(&docs)?;
                        &fitted
                    }
                };
                records.par_iter().map(|r| tfidf_score(model, &r.s1, &r.s2, stopwords)).collect()
            }
            Scorer::Embedding(table) => records
                .par_iter()
                .map(|r| embedding_score(table, &format!("{}:1", r.id), &format!("{}:2", r.id)))
                .collect(),
        }
    }
}

fn words_score(provider: &dyn WordSimilarity, weights: CombineWeights, s1: &TokenSequence, s2: &TokenSequence) -> f64 {
    combined_similarity(s1, s2, provider, weights)
}

fn tfidf_score(model: &TfIdfModel, a: &str, b: &str, stopwords: &StopwordSet) -> Result<f64, BenchError> {
    let va = model.vectorize(&preprocess(a, stopwords));
    let vb = model.vectorize(&preprocess(b, stopwords));
    Ok(cosine(&va, &vb)?)
}

fn embedding_score(table: &EmbeddingTable, a: &str, b: &str) -> Result<f64, BenchError> {
    for id in [a, b] {
        if table.get(id).is_none() {
            return Err(BenchError::MissingEmbedding(id.to_string()));
        }
    }
    Ok(table.similarity(a, b).expect("both ids present"))
}

/// (train, test) records per task.
type TrainTest = (Vec<PairRecord>, Vec<PairRecord>);

struct Tasks {
    sick: Option<TrainTest>,
    afs: Option<TrainTest>,
    mrpc: Option<TrainTest>,
}

fn read_text(path: &Path) -> Result<String, BenchError> {
    fs::read_to_string(path).map_err(|source| BenchError::Dataset {
        path: path.into(),
        source: DatasetError::Io { path: path.display().to_string(), source },
    })
}

fn wrap(path: &Path) -> impl FnOnce(DatasetError) -> BenchError + '_ {
    move |source| BenchError::Dataset { path: path.into(), source }
}

fn dataset_exists(path: &Path) -> Result<(), BenchError> {
    if !path.exists() {
        return Err(BenchError::MissingAsset {
            method: "-".into(),
            asset: "dataset",
            path: path.into(),
        });
    }
    Ok(())
}

impl Tasks {
    fn load(paths: &DatasetPaths, seed: u64) -> Result<Tasks, BenchError> {
        let split = SplitSpec::standard(seed);
        let sick = match &paths.sick {
            Some(p) => {
                dataset_exists(p)?;
                let views = load_sick(p).map_err(wrap(p))?;
                let s = split_dataset(&views.relatedness, &split);
                Some((s.train, s.test))
            }
            None => None,
        };
        let afs = match &paths.afs {
            Some(p) => {
                dataset_exists(p)?;
                let records = load_afs(p, &paths.afs_layout).map_err(wrap(p))?;
                let s = split_dataset(&records, &split);
                Some((s.train, s.test))
            }
            None => None,
        };
        let mrpc = match (&paths.mrpc, &paths.mrpc_test) {
            (Some(train), Some(test)) => {
                dataset_exists(train)?;
                dataset_exists(test)?;
                let train_recs = parse_mrpc(&read_text(train)?, "mrpc", 0).map_err(wrap(train))?;
                let test_recs = parse_mrpc(&read_text(test)?, "mrpc", train_recs.len()).map_err(wrap(test))?;
                Some((train_recs, test_recs))
            }
            (Some(p), None) => {
                dataset_exists(p)?;
                let records = parse_mrpc(&read_text(p)?, "mrpc", 0).map_err(wrap(p))?;
                let s = split_dataset(&records, &split);
                Some((s.train, s.test))
            }
            (None, Some(_)) => return Err(BenchError::Config("mrpc_test given without mrpc".into())),
            (None, None) => None,
        };
        Ok(Tasks { sick, afs, mrpc })
    }
}

fn metric_cell(method: &str, column: Column, value: Result<f64, MetricError>) -> Cell {
    match value {
        Ok(v) => Cell::Value(v),
        Err(e) => {
            log::warn!("{method}: {} undefined: {e}", column.label());
            Cell::NotApplicable
        }
    }
}

fn correlation_cells(
    method: &Method,
    (train, test): &TrainTest,
    stopwords: &StopwordSet,
    pearson_col: Column,
    spearman_col: Column,
    row: &mut ReportRow,
) -> Result<(), BenchError> {
    let predicted = method.score_records(train, test, stopwords)?;
    let gold: Vec<f64> = test.iter().map(|r| r.gold.as_score().expect("score labels")).collect();
    row.set(pearson_col, metric_cell(method.name(), pearson_col, pearson(&predicted, &gold)));
    row.set(spearman_col, metric_cell(method.name(), spearman_col, spearman(&predicted, &gold)));
    Ok(())
}

fn mrpc_cell(method: &Method, train: &[PairRecord], test: &[PairRecord], stopwords: &StopwordSet) -> Result<Cell, BenchError> {
    let col = Column::MrpcAccuracy;
    let train_scores = method.score_records(train, train, stopwords)?;
    let scored: Vec<ScoredPair> = train
        .iter()
        .zip(&train_scores)
        .map(|(r, &p)| ScoredPair { id: r.id.clone(), predicted: p, gold: r.gold })
        .collect();
    let threshold = match calibrate_threshold(&scored) {
        Ok(t) => t,
        Err(e) => return Ok(metric_cell(method.name(), col, Err(e))),
    };
    log::info!("{}: MRPC threshold {threshold:.6}", method.name());
    let test_scores = method.score_records(train, test, stopwords)?;
    let preds: Vec<bool> = test_scores.iter().map(|&s| s >= threshold).collect();
    let golds: Vec<bool> = test.iter().map(|r| r.gold.as_binary().expect("binary labels")).collect();
    Ok(metric_cell(method.name(), col, accuracy(&preds, &golds)))
}

fn evaluate(method: &Method, tasks: &Tasks, stopwords: &StopwordSet) -> Result<ReportRow, BenchError> {
    let mut row = ReportRow::new(method.name());
    if let Some(task) = &tasks.sick {
        let start = Instant::now();
        correlation_cells(method, task, stopwords, Column::SickRPearson, Column::SickRSpearman, &mut row)?;
        log::info!("{}: SICK-R scored {} pairs in {:.2?}", method.name(), task.1.len(), start.elapsed());
    }
    if let Some(task) = &tasks.afs {
        let start = Instant::now();
        correlation_cells(method, task, stopwords, Column::AfsPearson, Column::AfsSpearman, &mut row)?;
        log::info!("{}: AFS scored {} pairs in {:.2?}", method.name(), task.1.len(), start.elapsed());
    }
    if let Some((train, test)) = &tasks.mrpc {
        let start = Instant::now();
        row.set(Column::MrpcAccuracy, mrpc_cell(method, train, test, stopwords)?);
        log::info!(
            "{}: MRPC scored {} pairs in {:.2?}",
            method.name(),
            train.len() + test.len(),
            start.elapsed()
        );
    }
    // scalar similarities carry no three-way entailment decision
    row.set(Column::SickEAccuracy, Cell::NotApplicable);
    Ok(row)
}

/// Loads the stop-word list named by the config, or the bundled English one.
pub fn load_stopwords(path: Option<&Path>) -> Result<StopwordSet, BenchError> {
    match path {
        None => Ok(StopwordSet::english()),
        Some(p) => {
            if !p.exists() {
                return Err(BenchError::MissingAsset { method: "-".into(), asset: "stop-word", path: p.into() });
            }
            StopwordSet::load(p).map_err(|source| BenchError::Stopwords { path: p.into(), source })
        }
    }
}

/// Runs every configured method over every configured task. The result
/// depends only on the config, the files it names and its seed.
pub fn run_benchmark(config: &BenchConfig) -> Result<ReportTable, BenchError> {
    if config.methods.is_empty() {
        return Err(BenchError::Config("no methods configured".into()));
    }
    let stopwords = load_stopwords(config.stopwords.as_deref())?;
    let tasks = Tasks::load(&config.datasets, config.seed)?;
    let mut table = ReportTable::default();
    for spec in &config.methods {
        let start = Instant::now();
        let method = Method::build(spec, &stopwords, config.seed)?;
        log::info!("{}: assets loaded in {:.2?}", spec.name, start.elapsed());
        table.rows.push(evaluate(&method, &tasks, &stopwords)?);
    }
    Ok(table)
}
