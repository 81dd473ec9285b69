//! Sentence similarity from word similarity: exact-match removal, a joint
//! string/knowledge matrix over the leftover words, greedy extraction of
//! the largest entries, and the final length-normalized score
//!
//! ```text
//! S = (δ + Σρ) · (m + n) / (2 · m · n)
//! ```
//!
//! where `δ` is the number of exactly matched words, `ρ` the greedily
//! extracted matrix values and `m`, `n` the stop-word-free sentence lengths.

use thiserror::Error;

use crate::corpus::{CooccurrenceModel, LsaModel};
use crate::stringsim::string_word_sim;
use crate::taxonomy::Taxonomy;
use crate::textprep::TokenSequence;

/// A symmetric word similarity in `[0, 1]`.
pub trait WordSimilarity: Sync {
    fn similarity(&self, a: &str, b: &str) -> f64;
}

impl<F> WordSimilarity for F
where
    F: Fn(&str, &str) -> f64 + Sync,
{
    fn similarity(&self, a: &str, b: &str) -> f64 {
        self(a, b)
    }
}

/// The LCS-based string measure; empty words score 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct StringSimilarity;

impl WordSimilarity for StringSimilarity {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        string_word_sim(a, b).unwrap_or(0.0)
    }
}

/// Provider that never finds any relation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSimilarity;

impl WordSimilarity for NoSimilarity {
    fn similarity(&self, _: &str, _: &str) -> f64 {
        0.0
    }
}

impl WordSimilarity for Taxonomy {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        self.lin_similarity(a, b)
    }
}

impl WordSimilarity for CooccurrenceModel {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        self.npmi_similarity(a, b)
    }
}

impl WordSimilarity for LsaModel {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        crate::corpus::lsa_similarity(self, a, b)
    }
}

impl<T: WordSimilarity + ?Sized + Send> WordSimilarity for std::sync::Arc<T> {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        (**self).similarity(a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("weights must be finite and non-negative, got ({0}, {1})")]
    Negative(f64, f64),
    #[error("weights must sum to 1, got {0}")]
    BadSum(f64),
}

/// Convex combination of the string and knowledge matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombineWeights {
    w_string: f64,
    w_knowledge: f64,
}

impl Default for CombineWeights {
    fn default() -> Self {
        CombineWeights {
            w_string: 0.5,
            w_knowledge: 0.5,
        }
    }
}

impl CombineWeights {
    pub fn new(w_string: f64, w_knowledge: f64) -> Result<Self, WeightError> {
        if !(w_string.is_finite() && w_knowledge.is_finite()) || w_string < 0.0 || w_knowledge < 0.0 {
            return Err(WeightError::Negative(w_string, w_knowledge));
        }
        let sum = w_string + w_knowledge;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(WeightError::BadSum(sum));
        }
        Ok(CombineWeights {
            w_string,
            w_knowledge: 1.0 - w_string,
        })
    }

    /// Weight on the string matrix; the knowledge weight is the complement.
    pub fn from_string_weight(w_string: f64) -> Result<Self, WeightError> {
        if !(0.0..=1.0).contains(&w_string) {
            return Err(WeightError::Negative(w_string, 1.0 - w_string));
        }
        Self::new(w_string, 1.0 - w_string)
    }

    pub fn string_only() -> Self {
        CombineWeights {
            w_string: 1.0,
            w_knowledge: 0.0,
        }
    }

    pub fn knowledge_only() -> Self {
        CombineWeights {
            w_string: 0.0,
            w_knowledge: 1.0,
        }
    }

    pub fn w_string(&self) -> f64 {
        self.w_string
    }

    pub fn w_knowledge(&self) -> f64 {
        self.w_knowledge
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Number of matched word pairs.
    pub delta: usize,
    pub rest1: Vec<String>,
    pub rest2: Vec<String>,
    /// Lengths of the sentences before matching.
    pub m: usize,
    pub n: usize,
}

/// Multiset exact matching: each occurrence in `s1` pairs with at most one
/// identical unmatched occurrence in `s2`. Unmatched words keep their order.
pub fn exact_match_filter(s1: &TokenSequence, s2: &TokenSequence) -> MatchResult {
    let mut used = vec![false; s2.len()];
    let mut rest1 = Vec::new();
    let mut delta = 0;
    for w in s1.iter() {
        let hit = s2
            .iter()
            .enumerate()
            .position(|(j, t)| !used[j] && t == w);
        match hit {
            Some(j) => {
                used[j] = true;
                delta += 1;
            }
            None => rest1.push(w.to_string()),
        }
    }
    let rest2 = s2
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(t, _)| t.to_string())
        .collect();
    MatchResult {
        delta,
        rest1,
        rest2,
        m: s1.len(),
        n: s2.len(),
    }
}

/// Row-major `rows × cols` grid of combined word similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    pub row_words: Vec<String>,
    pub col_words: Vec<String>,
}

impl JointMatrix {
    /// Wraps raw values; entries are clamped to `[0, 1]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        JointMatrix {
            rows: rows.len(),
            cols,
            values: rows.iter().flatten().map(|v| v.clamp(0.0, 1.0)).collect(),
            row_words: Vec::new(),
            col_words: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn transpose(&self) -> JointMatrix {
        let mut values = Vec::with_capacity(self.values.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                values.push(self.get(r, c));
            }
        }
        JointMatrix {
            rows: self.cols,
            cols: self.rows,
            values,
            row_words: self.col_words.clone(),
            col_words: self.row_words.clone(),
        }
    }
}

/// `entry(i, j) = w_s · string(rest1[i], rest2[j]) + w_k · provider(rest1[i], rest2[j])`
pub fn build_joint_matrix<P: WordSimilarity + ?Sized>(
    rest1: &[String],
    rest2: &[String],
    provider: &P,
    weights: CombineWeights,
) -> JointMatrix {
    let mut values = Vec::with_capacity(rest1.len() * rest2.len());
    for a in rest1 {
        for b in rest2 {
            let mut v = 0.0;
            if weights.w_string > 0.0 {
                v += weights.w_string * StringSimilarity.similarity(a, b);
            }
            if weights.w_knowledge > 0.0 {
                v += weights.w_knowledge * provider.similarity(a, b).clamp(0.0, 1.0);
            }
            values.push(v.clamp(0.0, 1.0));
        }
    }
    JointMatrix {
        rows: rest1.len(),
        cols: rest2.len(),
        values,
        row_words: rest1.to_vec(),
        col_words: rest2.to_vec(),
    }
}

/// Repeatedly takes the global maximum (ties: lowest row, then lowest
/// column), records it and deletes its row and column. Stops when the
/// maximum is not positive or a dimension runs out.
pub fn greedy_extract(mat: &JointMatrix) -> Vec<f64> {
    let mut row_alive = vec![true; mat.rows];
    let mut col_alive = vec![true; mat.cols];
    let mut rho = Vec::new();
    for _ in 0..mat.rows.min(mat.cols) {
        let mut best: Option<(usize, usize, f64)> = None;
        for r in (0..mat.rows).filter(|&r| row_alive[r]) {
            for c in (0..mat.cols).filter(|&c| col_alive[c]) {
                let v = mat.get(r, c);
                if best.is_none_or(|(_, _, b)| v > b) {
                    best = Some((r, c, v));
                }
            }
        }
        match best {
            Some((r, c, v)) if v > 0.0 => {
                rho.push(v);
                row_alive[r] = false;
                col_alive[c] = false;
            }
            _ => break,
        }
    }
    rho
}

/// Full pipeline on two stop-word-filtered sentences. Both empty scores 1,
/// exactly one empty scores 0; otherwise the result is clamped to `[0, 1]`.
pub fn combined_similarity<P: WordSimilarity + ?Sized>(
    s1: &TokenSequence,
    s2: &TokenSequence,
    provider: &P,
    weights: CombineWeights,
) -> f64 {
    match (s1.is_empty(), s2.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let matched = exact_match_filter(s1, s2);
    let joint = build_joint_matrix(&matched.rest1, &matched.rest2, provider, weights);
    let rho: f64 = greedy_extract(&joint).iter().sum();
    score_from_parts(matched.delta, rho, matched.m, matched.n)
}

fn score_from_parts(delta: usize, rho_sum: f64, m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    ((delta as f64 + rho_sum) * (m + n) / (2.0 * m * n)).clamp(0.0, 1.0)
}
