//! Benchmark configuration files.
//!
//! Line-oriented `key = value` pairs. Global keys come first; each
//! `[method:NAME]` header opens a section describing one method. `#` starts
//! a comment line. Relative paths resolve against the config file's
//! directory.
//!
//! ```text
//! seed = 42
//! mrpc = data/msr_paraphrase.txt
//! sick = data/SICK.txt
//!
//! [method:lin+string]
//! taxonomy = wordnet.tsv
//! weights = 0.5
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use docsim::datasets::AfsLayout;
use docsim::eval::{BenchConfig, DatasetPaths, MethodKind, MethodSpec};
use docsim::sentsim::CombineWeights;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("config: {0}")]
    Invalid(String),
}

/// A parsed configuration: the benchmark description plus where to write
/// reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub bench: BenchConfig,
    /// Report path prefix; `.md` and `.csv` are appended.
    pub out: Option<PathBuf>,
}

fn syntax(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| syntax(line, format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(syntax(line, format!("{key}: expected true or false, got {value:?}"))),
    }
}

/// Parses `score,s1,s2`-style AFS column orders, e.g. `s1,s2,score`.
fn parse_afs_columns(line: usize, value: &str, layout: &mut AfsLayout) -> Result<(), ConfigError> {
    let names: Vec<String> = value.split(',').map(|s| s.trim().to_ascii_lowercase()).collect();
    let find = |want: &str| {
        names
            .iter()
            .position(|n| n == want)
            .ok_or_else(|| syntax(line, format!("afs_columns: missing {want:?}")))
    };
    layout.score_col = find("score")?;
    layout.s1_col = find("s1")?;
    layout.s2_col = find("s2")?;
    layout.fields = names.len();
    Ok(())
}

struct Section {
    header_line: usize,
    spec: MethodSpec,
    kind_set: bool,
}

/// Parses config text; relative paths are joined onto `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
    let path = |v: &str| {
        let p = Path::new(v);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let mut seed = None;
    let mut stopwords = None;
    let mut out = None;
    let mut datasets = DatasetPaths::default();
    let mut sections: Vec<Section> = Vec::new();
    let mut seen_global: Vec<String> = Vec::new();
    let mut seen_local: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(inner) = l.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "unterminated section header"))?;
            let name = inner
                .trim()
                .strip_prefix("method:")
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .ok_or_else(|| syntax(line, format!("expected [method:NAME], got [{inner}]")))?;
            if sections.iter().any(|s| s.spec.name == name) {
                return Err(syntax(line, format!("duplicate method {name:?}")));
            }
            // the name doubles as the kind unless `kind` says otherwise
            let kind = name.parse().unwrap_or(MethodKind::String);
            sections.push(Section {
                header_line: line,
                spec: MethodSpec::new(name, kind),
                kind_set: name.parse::<MethodKind>().is_ok(),
            });
            seen_local.clear();
            continue;
        }
        let (key, value) = l
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key = value, got {l:?}")))?;
        let (key, value) = (key.trim().to_ascii_lowercase(), value.trim());
        if value.is_empty() {
            return Err(syntax(line, format!("{key}: empty value")));
        }
        let seen = if sections.is_empty() { &mut seen_global } else { &mut seen_local };
        if seen.contains(&key) {
            return Err(syntax(line, format!("duplicate key {key:?}")));
        }
        seen.push(key.clone());

        match sections.last_mut() {
            None => match key.as_str() {
                "seed" => seed = Some(parse_num(line, &key, value)?),
                "stopwords" => stopwords = Some(path(value)),
                "out" => out = Some(path(value)),
                "mrpc" => datasets.mrpc = Some(path(value)),
                "mrpc_test" => datasets.mrpc_test = Some(path(value)),
                "afs" => datasets.afs = Some(path(value)),
                "afs_header" => datasets.afs_layout.header = parse_bool(line, &key, value)?,
                "afs_columns" => parse_afs_columns(line, value, &mut datasets.afs_layout)?,
                "sick" => datasets.sick = Some(path(value)),
                _ => return Err(syntax(line, format!("unknown key {key:?}"))),
            },
            Some(section) => {
                let spec = &mut section.spec;
                match key.as_str() {
                    "kind" => {
                        spec.kind = value.parse().map_err(|e: String| syntax(line, e))?;
                        section.kind_set = true;
                    }
                    "taxonomy" => spec.taxonomy = Some(path(value)),
                    "embeddings" => spec.embeddings = Some(path(value)),
                    "corpus" => spec.corpus = Some(path(value)),
                    "weights" => {
                        let w: f64 = parse_num(line, &key, value)?;
                        let w = CombineWeights::from_string_weight(w).map_err(|e| syntax(line, e.to_string()))?;
                        spec.weights = Some(w);
                    }
                    "window" => {
                        spec.window = parse_num(line, &key, value)?;
                        if spec.window == 0 {
                            return Err(syntax(line, "window must be positive"));
                        }
                    }
                    "rank" => {
                        spec.rank = parse_num(line, &key, value)?;
                        if spec.rank == 0 {
                            return Err(syntax(line, "rank must be positive"));
                        }
                    }
                    _ => return Err(syntax(line, format!("unknown method key {key:?}"))),
                }
            }
        }
    }

    if let Some(s) = sections.iter().find(|s| !s.kind_set) {
        return Err(syntax(
            s.header_line,
            format!("method {:?} is not a known kind; add `kind = ...`", s.spec.name),
        ));
    }
    if sections.is_empty() {
        return Err(ConfigError::Invalid("no [method:NAME] sections".into()));
    }
    if datasets.mrpc.is_none() && datasets.afs.is_none() && datasets.sick.is_none() {
        return Err(ConfigError::Invalid("no datasets configured (mrpc, afs or sick)".into()));
    }
    if datasets.mrpc_test.is_some() && datasets.mrpc.is_none() {
        return Err(ConfigError::Invalid("mrpc_test requires mrpc".into()));
    }
    let seed = seed.ok_or_else(|| ConfigError::Invalid("missing seed".into()))?;
    Ok(RunConfig {
        bench: BenchConfig {
            seed,
            stopwords,
            datasets,
            methods: sections.into_iter().map(|s| s.spec).collect(),
        },
        out,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config(&text, base)
}
