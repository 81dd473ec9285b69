use super::svd::{truncated_svd, LinearOperator, SvdOptions};
use super::termdoc::{build_term_doc, TermDocMatrix};
use super::{CorpusError, Vocab};
use crate::textprep::TokenSequence;

pub const DEFAULT_LSA_RANK: usize = 100;

/// Latent word vectors: rows of `U_k Σ_k` from the term-document SVD.
#[derive(Debug, Clone)]
pub struct LsaModel {
    vocab: Vocab,
    vectors: Vec<Vec<f64>>,
    singular_values: Vec<f64>,
}

impl LsaModel {
    /// Factorizes `matrix` at rank `k`. `k` must lie in `1..=min(rows, cols)`.
    pub fn from_matrix(matrix: &TermDocMatrix, k: usize, opts: &SvdOptions) -> Result<Self, CorpusError> {
        let svd = truncated_svd(matrix, k, opts)?;
        let rows = matrix.nrows();
        let vectors = (0..rows)
            .map(|r| svd.u.iter().zip(&svd.s).map(|(u, s)| u[r] * s).collect())
            .collect();
        Ok(LsaModel {
            vocab: matrix.vocab().clone(),
            vectors,
            singular_values: svd.s,
        })
    }

    /// Builds the term-document matrix and factorizes it, clamping `k` to
    /// the matrix dimensions.
    pub fn fit(corpus: &[TokenSequence], k: usize, opts: &SvdOptions) -> Result<Self, CorpusError> {
        let matrix = build_term_doc(corpus)?;
        let max = matrix.nrows().min(matrix.ncols());
        if max == 0 {
            return Err(CorpusError::EmptyCorpus);
        }
        Self::from_matrix(&matrix, k.clamp(1, max), opts)
    }

    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.vocab.get(word).map(|i| self.vectors[i].as_slice())
    }

    pub fn similarity(&self, w1: &str, w2: &str) -> f64 {
        lsa_similarity(self, w1, w2)
    }
}

/// Cosine of the latent vectors, negatives clamped to 0; unknown words and
/// zero vectors score 0.
pub fn lsa_similarity(model: &LsaModel, w1: &str, w2: &str) -> f64 {
    let (Some(a), Some(b)) = (model.vector(w1), model.vector(w2)) else {
        return 0.0;
    };
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}
