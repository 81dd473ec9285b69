use std::collections::BTreeMap;

use super::svd::LinearOperator;
use super::{CorpusError, Vocab};
use crate::textprep::TokenSequence;

/// Sparse TF-IDF weighted term × document matrix in CSR layout.
///
/// `entry(w, d) = tf(w, d) * ln(N / df(w))`; zero entries are not stored.
#[derive(Debug, Clone)]
pub struct TermDocMatrix {
    vocab: Vocab,
    n_docs: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

pub fn build_term_doc(corpus: &[TokenSequence]) -> Result<TermDocMatrix, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let vocab = Vocab::from_corpus(corpus);
    let n_docs = corpus.len();
    let mut rows: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); vocab.len()];
    for (d, doc) in corpus.iter().enumerate() {
        for tok in doc.iter() {
            let w = vocab.get(tok).expect("vocab built from corpus");
            *rows[w].entry(d as u32).or_insert(0) += 1;
        }
    }
    let mut row_ptr = Vec::with_capacity(vocab.len() + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    row_ptr.push(0);
    for row in &rows {
        let idf = (n_docs as f64 / row.len() as f64).ln();
        if idf > 0.0 {
            for (&d, &tf) in row {
                col_idx.push(d);
                values.push(tf as f64 * idf);
            }
        }
        row_ptr.push(col_idx.len());
    }
    Ok(TermDocMatrix {
        vocab,
        n_docs,
        row_ptr,
        col_idx,
        values,
    })
}

impl TermDocMatrix {
    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, word: &str, doc: usize) -> f64 {
        let Some(r) = self.vocab.get(word) else {
            return 0.0;
        };
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .position(|&c| c as usize == doc)
            .map_or(0.0, |p| self.values[span.start + p])
    }

    /// Stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.vocab.len()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k] as usize, self.values[k]))
        })
    }
}

impl LinearOperator for TermDocMatrix {
    fn nrows(&self) -> usize {
        self.vocab.len()
    }

    fn ncols(&self) -> usize {
        self.n_docs
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k] as usize];
            }
            *out = acc;
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (r, &xr) in x.iter().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[k] as usize] += self.values[k] * xr;
            }
        }
    }
}
