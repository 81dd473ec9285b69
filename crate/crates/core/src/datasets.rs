//! Loaders for the MRPC, AFS and SICK benchmark files and the seeded
//! train/test/dev split.
//!
//! Record ids are `<dataset>:<row>`, where `row` counts data rows from 0 in
//! file order (headers, blank lines and comments excluded). Sentence text is
//! never altered, except that AFS doubled commas collapse to single commas.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::rng::Lcg64;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {reason}")]
    BadValue { line: usize, reason: String },
    #[error("missing column {0:?} in header")]
    MissingColumn(String),
    #[error("file has no header line")]
    MissingHeader,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entailment {
    Entailment,
    Neutral,
    Contradiction,
}

impl Entailment {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ENTAILMENT" => Some(Entailment::Entailment),
            "NEUTRAL" => Some(Entailment::Neutral),
            "CONTRADICTION" => Some(Entailment::Contradiction),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GoldLabel {
    Binary(bool),
    Score(f64),
    Entailment(Entailment),
}

impl GoldLabel {
    pub fn as_binary(&self) -> Option<bool> {
        match self {
            GoldLabel::Binary(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_score(&self) -> Option<f64> {
        match self {
            GoldLabel::Score(s) => Some(*s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub id: String,
    pub s1: String,
    pub s2: String,
    pub gold: GoldLabel,
}

fn read(path: &Path) -> Result<String, DatasetError> {
    fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Non-blank lines with 1-based numbers, trailing `\r` and a leading BOM
/// removed.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end_matches('\r');
        let l = if i == 0 { l.trim_start_matches('\u{feff}') } else { l };
        (!l.trim().is_empty()).then_some((i + 1, l))
    })
}

fn non_empty(line: usize, which: &str, s: &str) -> Result<String, DatasetError> {
    if s.trim().is_empty() {
        return Err(DatasetError::BadValue {
            line,
            reason: format!("{which} is empty"),
        });
    }
    Ok(s.to_string())
}

pub fn load_mrpc(path: impl AsRef<Path>) -> Result<Vec<PairRecord>, DatasetError> {
    parse_mrpc(&read(path.as_ref())?, "mrpc", 0)
}

/// Parses MRPC text: a header line, then `label<TAB>id1<TAB>id2<TAB>s1<TAB>s2`.
/// Row numbering for ids starts at `first_row`.
pub fn parse_mrpc(text: &str, dataset: &str, first_row: usize) -> Result<Vec<PairRecord>, DatasetError> {
    let mut lines = data_lines(text);
    lines.next().ok_or(DatasetError::MissingHeader)?;
    let mut out = Vec::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 5 {
            return Err(DatasetError::FieldCount {
                line,
                expected: 5,
                found: fields.len(),
            });
        }
        let gold = match fields[0].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(DatasetError::BadValue {
                    line,
                    reason: format!("label {other:?} is not 0 or 1"),
                })
            }
        };
        out.push(PairRecord {
            id: format!("{dataset}:{}", first_row + out.len()),
            s1: non_empty(line, "sentence 1", fields[3])?,
            s2: non_empty(line, "sentence 2", fields[4])?,
            gold: GoldLabel::Binary(gold),
        });
    }
    Ok(out)
}

/// Column layout of an AFS file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AfsLayout {
    /// Skip the first non-blank line.
    pub header: bool,
    /// Fields per line after splitting.
    pub fields: usize,
    pub score_col: usize,
    pub s1_col: usize,
    pub s2_col: usize,
}

impl Default for AfsLayout {
    fn default() -> Self {
        AfsLayout {
            header: false,
            fields: 3,
            score_col: 0,
            s1_col: 1,
            s2_col: 2,
        }
    }
}

/// Splits one AFS line. A lone comma separates fields; a doubled comma is a
/// literal comma inside a field, so an even run of `2k` commas stands for `k`
/// literal commas. Odd runs of three or more are ambiguous and rejected.
pub fn split_afs_line(line: &str) -> Result<Vec<String>, String> {
    let mut fields = vec![String::new()];
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != ',' {
            fields.last_mut().expect("non-empty").push(chars[i]);
            i += 1;
            continue;
        }
        let run = chars[i..].iter().take_while(|&&c| c == ',').count();
        match run {
            1 => fields.push(String::new()),
            n if n % 2 == 0 => fields
                .last_mut()
                .expect("non-empty")
                .extend(std::iter::repeat_n(',', n / 2)),
            n => return Err(format!("ambiguous run of {n} commas at column {}", i + 1)),
        }
        i += run;
    }
    Ok(fields)
}

pub fn load_afs(path: impl AsRef<Path>, layout: &AfsLayout) -> Result<Vec<PairRecord>, DatasetError> {
    parse_afs(&read(path.as_ref())?, layout)
}

pub fn parse_afs(text: &str, layout: &AfsLayout) -> Result<Vec<PairRecord>, DatasetError> {
    let mut lines = data_lines(text);
    if layout.header {
        lines.next().ok_or(DatasetError::MissingHeader)?;
    }
    let mut out = Vec::new();
    for (line, l) in lines {
        let fields = split_afs_line(l).map_err(|reason| DatasetError::BadValue { line, reason })?;
        if fields.len() != layout.fields {
            return Err(DatasetError::FieldCount {
                line,
                expected: layout.fields,
                found: fields.len(),
            });
        }
        let raw_score = fields[layout.score_col].trim();
        let score = raw_score
            .parse::<f64>()
            .ok()
            .filter(|s| s.is_finite())
            .ok_or_else(|| DatasetError::BadValue {
                line,
                reason: format!("unparseable score {raw_score:?}"),
            })?;
        out.push(PairRecord {
            id: format!("afs:{}", out.len()),
            s1: non_empty(line, "sentence 1", &fields[layout.s1_col])?,
            s2: non_empty(line, "sentence 2", &fields[layout.s2_col])?,
            gold: GoldLabel::Score(score),
        });
    }
    Ok(out)
}

/// The two views of a SICK file, aligned by index and sharing ids.
#[derive(Debug, Clone, Default)]
pub struct SickViews {
    pub relatedness: Vec<PairRecord>,
    pub entailment: Vec<PairRecord>,
}

pub fn load_sick(path: impl AsRef<Path>) -> Result<SickViews, DatasetError> {
    parse_sick(&read(path.as_ref())?)
}

/// Tab-separated with a header naming `sentence_A`, `sentence_B`,
/// `relatedness_score` and `entailment_judgment` (or `entailment_label`),
/// matched case-insensitively.
pub fn parse_sick(text: &str) -> Result<SickViews, DatasetError> {
    let mut lines = data_lines(text);
    let (_, header) = lines.next().ok_or(DatasetError::MissingHeader)?;
    let names: Vec<String> = header.split('\t').map(|h| h.trim().to_ascii_lowercase()).collect();
    let find = |aliases: &[&str]| {
        names
            .iter()
            .position(|n| aliases.contains(&n.as_str()))
            .ok_or_else(|| DatasetError::MissingColumn(aliases[0].to_string()))
    };
    let col_a = find(&["sentence_a"])?;
    let col_b = find(&["sentence_b"])?;
    let col_score = find(&["relatedness_score"])?;
    let col_label = find(&["entailment_judgment", "entailment_label"])?;

    let mut views = SickViews::default();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != names.len() {
            return Err(DatasetError::FieldCount {
                line,
                expected: names.len(),
                found: fields.len(),
            });
        }
        let raw_score = fields[col_score].trim();
        let score = raw_score
            .parse::<f64>()
            .ok()
            .filter(|s| (1.0..=5.0).contains(s))
            .ok_or_else(|| DatasetError::BadValue {
                line,
                reason: format!("relatedness score {raw_score:?} is not a number in [1, 5]"),
            })?;
        let label = Entailment::parse(fields[col_label]).ok_or_else(|| DatasetError::BadValue {
            line,
            reason: format!("unknown entailment label {:?}", fields[col_label].trim()),
        })?;
        let id = format!("sick:{}", views.relatedness.len());
        let s1 = non_empty(line, "sentence_A", fields[col_a])?;
        let s2 = non_empty(line, "sentence_B", fields[col_b])?;
        views.entailment.push(PairRecord {
            id: id.clone(),
            s1: s1.clone(),
            s2: s2.clone(),
            gold: GoldLabel::Entailment(label),
        });
        views.relatedness.push(PairRecord {
            id,
            s1,
            s2,
            gold: GoldLabel::Score(score),
        });
    }
    Ok(views)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub train_frac: f64,
    pub test_frac: f64,
    pub dev_frac: f64,
    pub seed: u64,
}

impl SplitSpec {
    /// The 60/20/20 train/test/dev split.
    pub fn standard(seed: u64) -> Self {
        SplitSpec {
            train_frac: 0.6,
            test_frac: 0.2,
            dev_frac: 0.2,
            seed,
        }
    }

    /// `(train, test, dev)` sizes for `n` records: floors for train and
    /// test, the remainder for dev.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let floor = |f: f64| ((f * n as f64) + 1e-9).floor() as usize;
        let train = floor(self.train_frac).min(n);
        let test = floor(self.test_frac).min(n - train);
        (train, test, n - train - test)
    }
}

#[derive(Debug, Clone)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub test: Vec<T>,
    pub dev: Vec<T>,
}

/// Seeded Fisher–Yates permutation of record indices followed by
/// contiguous slicing. Two lists of equal length split with the same seed
/// land in the same partition positions.
pub fn split_dataset<T: Clone>(records: &[T], spec: &SplitSpec) -> Split<T> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    Lcg64::new(spec.seed).shuffle(&mut order);
    let (train, test, _) = spec.sizes(records.len());
    let pick = |idx: &[usize]| idx.iter().map(|&i| records[i].clone()).collect::<Vec<T>>();
    Split {
        train: pick(&order[..train]),
        test: pick(&order[train..train + test]),
        dev: pick(&order[train + test..]),
    }
}
