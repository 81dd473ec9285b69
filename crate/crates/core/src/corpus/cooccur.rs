use std::collections::HashMap;

use super::{CorpusError, Vocab};
use crate::textprep::TokenSequence;

/// Window size used when none is configured.
pub const DEFAULT_WINDOW: usize = 10;

/// Window co-occurrence counts.
///
/// A sequence of length `L` contributes `max(1, L - w + 1)` windows of `w`
/// consecutive tokens (one window covering the whole sequence when it is
/// shorter than `w`). Within each window every distinct word counts once
/// towards its unigram count and every distinct unordered pair of distinct
/// words counts once towards its pair count.
#[derive(Debug, Clone)]
pub struct CooccurrenceModel {
    vocab: Vocab,
    unigram: Vec<u64>,
    pairs: HashMap<(u32, u32), u64>,
    window_total: u64,
    window_size: usize,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn build_cooccurrence(
    corpus: &[TokenSequence],
    window_size: usize,
) -> Result<CooccurrenceModel, CorpusError> {
    if window_size == 0 {
        return Err(CorpusError::InvalidWindow);
    }
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut vocab = Vocab::default();
    let mut unigram: Vec<u64> = Vec::new();
    let mut pairs: HashMap<(u32, u32), u64> = HashMap::new();
    let mut window_total = 0u64;
    let mut ids = Vec::new();
    let mut distinct = Vec::new();

    for doc in corpus {
        if doc.is_empty() {
            continue;
        }
        ids.clear();
        ids.extend(doc.iter().map(|t| vocab.insert(t)));
        unigram.resize(vocab.len(), 0);
        let width = window_size.min(ids.len());
        for window in ids.windows(width) {
            window_total += 1;
            distinct.clear();
            distinct.extend_from_slice(window);
            distinct.sort_unstable();
            distinct.dedup();
            for (i, &a) in distinct.iter().enumerate() {
                unigram[a as usize] += 1;
                for &b in &distinct[i + 1..] {
                    *pairs.entry(key(a, b)).or_insert(0) += 1;
                }
            }
        }
    }
    if window_total == 0 {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(CooccurrenceModel {
        vocab,
        unigram,
        pairs,
        window_total,
        window_size,
    })
}

impl CooccurrenceModel {
    pub fn window_total(&self) -> u64 {
        self.window_total
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn unigram_count(&self, w: &str) -> u64 {
        self.vocab.get(w).map_or(0, |i| self.unigram[i])
    }

    /// Number of windows containing both words; for `w1 == w2` this is the
    /// unigram count.
    pub fn pair_count(&self, w1: &str, w2: &str) -> u64 {
        match (self.vocab.get(w1), self.vocab.get(w2)) {
            (Some(a), Some(b)) if a == b => self.unigram[a],
            (Some(a), Some(b)) => self
                .pairs
                .get(&key(a as u32, b as u32))
                .copied()
                .unwrap_or(0),
            _ => 0,
        }
    }

    /// Normalized PMI clamped to `[0, 1]`.
    ///
    /// `npmi = ln(p(a,b) / (p(a) p(b))) / -ln p(a,b)`. Pairs that never
    /// co-occur (or involve unknown words) score 0; a joint probability of 1
    /// scores 1.
    pub fn npmi_similarity(&self, w1: &str, w2: &str) -> f64 {
        let joint = self.pair_count(w1, w2);
        let (c1, c2) = (self.unigram_count(w1), self.unigram_count(w2));
        if joint == 0 || c1 == 0 || c2 == 0 {
            return 0.0;
        }
        let total = self.window_total as f64;
        let p12 = joint as f64 / total;
        if joint >= self.window_total {
            return 1.0;
        }
        let p1 = c1 as f64 / total;
        let p2 = c2 as f64 / total;
        let pmi = (p12 / (p1 * p2)).ln();
        (pmi / -p12.ln()).clamp(0.0, 1.0)
    }
}
