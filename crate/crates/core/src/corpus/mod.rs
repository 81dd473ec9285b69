//! Corpus-based word similarity: PMI over co-occurrence windows and LSA over
//! a TF-IDF term-document matrix.

mod cooccur;
mod lsa;
pub mod svd;
mod termdoc;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::textprep::{preprocess, StopwordSet, TokenSequence};

pub use cooccur::{build_cooccurrence, CooccurrenceModel, DEFAULT_WINDOW};
pub use lsa::{lsa_similarity, LsaModel, DEFAULT_LSA_RANK};
pub use svd::{truncated_svd, DenseMatrix, LinearOperator, Svd, SvdOptions};
pub use termdoc::{build_term_doc, TermDocMatrix};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("window size must be at least 1")]
    InvalidWindow,
    #[error("rank {k} is outside 1..={max}")]
    InvalidRank { k: usize, max: usize },
    #[error("SVD did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Dense word → index mapping in first-seen order.
#[derive(Debug, Clone, Default)]
pub struct Vocab {
    index: HashMap<String, u32>,
    words: Vec<String>,
}

impl Vocab {
    pub fn from_corpus(corpus: &[TokenSequence]) -> Self {
        let mut v = Vocab::default();
        for doc in corpus {
            for tok in doc.iter() {
                v.insert(tok);
            }
        }
        v
    }

    pub fn insert(&mut self, word: &str) -> u32 {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let i = self.words.len() as u32;
        self.index.insert(word.to_string(), i);
        self.words.push(word.to_string());
        i
    }

    pub fn get(&self, word: &str) -> Option<usize> {
        self.index.get(word).map(|&i| i as usize)
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Reads a corpus file with one document per line, preprocessed the same
/// way as benchmark sentences.
pub fn load_corpus(
    path: impl AsRef<Path>,
    stopwords: &StopwordSet,
) -> Result<Vec<TokenSequence>, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let docs: Vec<TokenSequence> = text.lines().map(|l| preprocess(l, stopwords)).collect();
    if docs.iter().all(TokenSequence::is_empty) {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(docs)
}
