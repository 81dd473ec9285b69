//! Word-level string similarity from three longest-common-subsequence
//! variants.
//!
//! * `lcs_len`: longest common subsequence, gaps allowed.
//! * `mclcs_1`: longest common run starting at the first character of both
//!   words (common prefix).
//! * `mclcs_n`: longest common run starting anywhere (common substring).
//!
//! Each length `l` is normalized as `l² / (|a|·|b|)` and the three normalized
//! values are averaged. All lengths count Unicode scalar values.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StringSimError {
    #[error("string similarity is undefined for an empty word")]
    EmptyWord,
}

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

pub fn lcs_len(a: &str, b: &str) -> usize {
    let (a, b) = (chars(a), chars(b));
    // single-row DP over the shorter word
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut row = vec![0usize; short.len() + 1];
    for &lc in &long {
        let mut diag = 0;
        for (j, &sc) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if lc == sc { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[short.len()]
}

pub fn mclcs_1(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).count()
}

pub fn mclcs_n(a: &str, b: &str) -> usize {
    let (a, b) = (chars(a), chars(b));
    let mut best = 0;
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ac in &a {
        for (j, &bc) in b.iter().enumerate() {
            cur[j + 1] = if ac == bc { prev[j] + 1 } else { 0 };
            best = best.max(cur[j + 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// The three normalized component scores `(nlcs, nmclcs_1, nmclcs_n)`.
pub fn components(a: &str, b: &str) -> Result<(f64, f64, f64), StringSimError> {
    let la = a.chars().count();
    let lb = b.chars().count();
    if la == 0 || lb == 0 {
        return Err(StringSimError::EmptyWord);
    }
    let denom = (la * lb) as f64;
    let norm = |l: usize| (l * l) as f64 / denom;
    Ok((norm(lcs_len(a, b)), norm(mclcs_1(a, b)), norm(mclcs_n(a, b))))
}

/// Average of the three normalized LCS scores, in `[0, 1]`.
pub fn string_word_sim(a: &str, b: &str) -> Result<f64, StringSimError> {
    let (v1, v2, v3) = components(a, b)?;
    Ok(((v1 + v2 + v3) / 3.0).clamp(0.0, 1.0))
}
