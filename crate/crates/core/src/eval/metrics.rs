//! Correlation and classification metrics.
//!
//! Means and cross products use Neumaier-compensated summation.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("inputs differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("correlation is undefined for constant input")]
    Constant,
    #[error("input contains a non-finite value")]
    NonFinite,
    #[error("threshold calibration needs both positive and negative examples")]
    SingleClass,
    #[error("record {0} has no binary gold label")]
    NotBinary(String),
}

/// Neumaier's variant of Kahan summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<(), MetricError> {
    if xs.len() != ys.len() {
        return Err(MetricError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(MetricError::TooShort { needed: 2, got: xs.len() });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(MetricError::NonFinite);
    }
    let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if constant(xs) || constant(ys) {
        return Err(MetricError::Constant);
    }
    Ok(())
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, MetricError> {
    check_pair(xs, ys)?;
    let n = xs.len() as f64;
    let mx = compensated_sum(xs.iter().copied()) / n;
    let my = compensated_sum(ys.iter().copied()) / n;
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)));
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    let syy = compensated_sum(ys.iter().map(|y| (y - my) * (y - my)));
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(MetricError::Constant);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties replaced by their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // positions i..=j share ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson over tie-averaged ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, MetricError> {
    check_pair(xs, ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Fraction of positions where the prediction equals the gold label.
pub fn accuracy<T: PartialEq>(preds: &[T], golds: &[T]) -> Result<f64, MetricError> {
    if preds.len() != golds.len() {
        return Err(MetricError::LengthMismatch(preds.len(), golds.len()));
    }
    if preds.is_empty() {
        return Err(MetricError::TooShort { needed: 1, got: 0 });
    }
    let hits = preds.iter().zip(golds).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / preds.len() as f64)
}

/// Candidate thresholds: 0, 1 and the midpoints between adjacent distinct
/// predicted values, ascending.
pub fn threshold_candidates(scores: &[f64]) -> Vec<f64> {
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut cands = vec![0.0, 1.0];
    cands.extend(distinct.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    cands
}

/// The smallest candidate threshold maximizing training accuracy under the
/// rule "predict positive iff score >= threshold".
pub fn calibrate_scores(scored: &[(f64, bool)]) -> Result<f64, MetricError> {
    let positives = scored.iter().filter(|(_, g)| *g).count();
    if positives == 0 || positives == scored.len() {
        return Err(MetricError::SingleClass);
    }
    if scored.iter().any(|(s, _)| !s.is_finite()) {
        return Err(MetricError::NonFinite);
    }
    let mut sorted: Vec<(f64, bool)> = scored.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    // prefix[i] = positives among the i smallest scores
    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    prefix.push(0usize);
    for (_, g) in &sorted {
        prefix.push(prefix.last().unwrap() + usize::from(*g));
    }
    let negatives = sorted.len() - positives;
    let mut best: Option<(f64, usize)> = None;
    for t in threshold_candidates(&sorted.iter().map(|p| p.0).collect::<Vec<_>>()) {
        let below = sorted.partition_point(|p| p.0 < t);
        let pos_below = prefix[below];
        let neg_below = below - pos_below;
        let correct = (positives - pos_below) + neg_below;
        debug_assert!(neg_below <= negatives);
        if best.is_none_or(|(_, c)| correct > c) {
            best = Some((t, correct));
        }
    }
    Ok(best.expect("at least two candidates").0)
}
