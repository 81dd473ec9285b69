//! Sentence vectors and cosine scoring: TF-IDF vectors fitted on a corpus and
//! precomputed dense embeddings loaded from disk.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::corpus::Vocab;
use crate::textprep::TokenSequence;

#[derive(Debug, Error)]
pub enum VectorError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot compare a sparse vector with a dense one")]
    MixedRepresentation,
    #[error("cannot read embedding file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate embedding id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: expected dimension {expected}, found {found}")]
    InconsistentDimension {
        line: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone)]
pub struct TfIdfModel {
    vocab: Vocab,
    idf: Vec<f64>,
    document_count: usize,
}

/// Learns `idf(w) = ln(N / df(w))` over the corpus vocabulary.
pub fn fit_tfidf(corpus: &[TokenSequence]) -> Result<TfIdfModel, VectorError> {
    if corpus.is_empty() {
        return Err(VectorError::EmptyCorpus);
    }
    let vocab = Vocab::from_corpus(corpus);
    let mut df = vec![0usize; vocab.len()];
    let mut seen = vec![usize::MAX; vocab.len()];
    for (d, doc) in corpus.iter().enumerate() {
        for tok in doc.iter() {
            let w = vocab.get(tok).expect("vocab built from corpus");
            if seen[w] != d {
                seen[w] = d;
                df[w] += 1;
            }
        }
    }
    let n = corpus.len() as f64;
    let idf = df.iter().map(|&k| (n / k as f64).ln()).collect();
    Ok(TfIdfModel {
        vocab,
        idf,
        document_count: corpus.len(),
    })
}

impl TfIdfModel {
    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn idf(&self, word: &str) -> Option<f64> {
        self.vocab.get(word).map(|i| self.idf[i])
    }

    /// `entry(w) = tf(w) * idf(w)`; unknown words contribute nothing.
    pub fn vectorize(&self, sentence: &TokenSequence) -> SentenceVector {
        let mut tf: HashMap<usize, u32> = HashMap::new();
        for tok in sentence.iter() {
            if let Some(i) = self.vocab.get(tok) {
                *tf.entry(i).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(usize, f64)> = tf
            .into_iter()
            .map(|(i, n)| (i, n as f64 * self.idf[i]))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        SentenceVector::Sparse(entries)
    }
}

pub fn vectorize(model: &TfIdfModel, sentence: &TokenSequence) -> SentenceVector {
    model.vectorize(sentence)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SentenceVector {
    /// `(index, value)` pairs sorted by index, no explicit zeros.
    Sparse(Vec<(usize, f64)>),
    Dense(Vec<f64>),
}

impl SentenceVector {
    pub fn norm(&self) -> f64 {
        match self {
            SentenceVector::Sparse(e) => e.iter().map(|(_, v)| v * v).sum::<f64>().sqrt(),
            SentenceVector::Dense(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SentenceVector::Sparse(e) => e.iter().all(|(_, v)| *v == 0.0),
            SentenceVector::Dense(v) => v.iter().all(|x| *x == 0.0),
        }
    }

    /// Value at `index` (0 for absent sparse entries).
    pub fn get(&self, index: usize) -> f64 {
        match self {
            SentenceVector::Sparse(e) => e
                .binary_search_by_key(&index, |&(i, _)| i)
                .map_or(0.0, |p| e[p].1),
            SentenceVector::Dense(v) => v.get(index).copied().unwrap_or(0.0),
        }
    }
}

fn sparse_dot(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Cosine similarity clamped to `[0, 1]`; a zero vector on either side
/// scores 0.
pub fn cosine(v1: &SentenceVector, v2: &SentenceVector) -> Result<f64, VectorError> {
    let dot = match (v1, v2) {
        (SentenceVector::Sparse(a), SentenceVector::Sparse(b)) => sparse_dot(a, b),
        (SentenceVector::Dense(a), SentenceVector::Dense(b)) => {
            if a.len() != b.len() {
                return Err(VectorError::DimensionMismatch(a.len(), b.len()));
            }
            a.iter().zip(b).map(|(x, y)| x * y).sum()
        }
        _ => return Err(VectorError::MixedRepresentation),
    };
    let (n1, n2) = (v1.norm(), v2.norm());
    if n1 == 0.0 || n2 == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (n1 * n2)).clamp(0.0, 1.0))
}

/// Precomputed sentence embeddings keyed by id.
///
/// File format: `id<TAB>f1 f2 ... fd`, one vector per line. Blank lines and
/// lines starting with `#` are skipped.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, VectorError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| VectorError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, VectorError> {
        let mut table = EmbeddingTable::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((id, rest)) = line.split_once('\t') else {
                return Err(VectorError::Malformed {
                    line: line_no,
                    reason: "missing tab between id and vector".into(),
                });
            };
            let id = id.trim();
            if id.is_empty() {
                return Err(VectorError::Malformed {
                    line: line_no,
                    reason: "empty id".into(),
                });
            }
            let values = rest
                .split_whitespace()
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| VectorError::Malformed {
                            line: line_no,
                            reason: format!("non-numeric value {f:?}"),
                        })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            if values.is_empty() {
                return Err(VectorError::Malformed {
                    line: line_no,
                    reason: "empty vector".into(),
                });
            }
            if table.vectors.is_empty() {
                table.dim = values.len();
            } else if values.len() != table.dim {
                return Err(VectorError::InconsistentDimension {
                    line: line_no,
                    expected: table.dim,
                    found: values.len(),
                });
            }
            if table.vectors.insert(id.to_string(), values).is_some() {
                return Err(VectorError::DuplicateId {
                    line: line_no,
                    id: id.to_string(),
                });
            }
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.vectors.get(id).map(Vec::as_slice)
    }

    pub fn vector(&self, id: &str) -> Option<SentenceVector> {
        self.get(id).map(|v| SentenceVector::Dense(v.to_vec()))
    }

    /// Cosine between two stored vectors, `None` if either id is missing.
    pub fn similarity(&self, id1: &str, id2: &str) -> Option<f64> {
        let (a, b) = (self.vector(id1)?, self.vector(id2)?);
        Some(cosine(&a, &b).expect("uniform dimension"))
    }
}
