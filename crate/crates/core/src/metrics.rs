//! Ranking metrics. Higher scores mean "more anomalous" and label 1 is
//! the positive (outlier) class.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub roc_auc: f64,
    pub average_precision: f64,
    pub n_pos: usize,
    pub n_neg: usize,
}

fn class_counts(scores: &[f64], labels: &[u8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if let Some(row) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite { row, column: 0 });
    }
    if let Some(row) = labels.iter().position(|&l| l > 1) {
        return Err(Error::InvalidLabel {
            row,
            value: labels[row],
        });
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass {
            positives,
            negatives,
        });
    }
    Ok((positives, negatives))
}

/// Indices sorted by ascending score, then the groups of equal scores.
fn tie_groups(scores: &[f64]) -> (Vec<usize>, Vec<core::ops::Range<usize>>) {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || scores[order[i]] != scores[order[start]] {
            groups.push(start..i);
            start = i;
        }
    }
    (order, groups)
}

/// Area under the ROC curve as the Mann-Whitney statistic, with half
/// credit for tied (positive, negative) pairs.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    let (n_pos, n_neg) = class_counts(scores, labels)?;
    let (order, groups) = tie_groups(scores);
    // twice the number of winning pairs, kept integral
    let mut doubled_wins: u128 = 0;
    let mut neg_below: u128 = 0;
    for g in groups {
        let pos = order[g.clone()].iter().filter(|&&i| labels[i] == 1).count() as u128;
        let neg = g.len() as u128 - pos;
        doubled_wins += pos * (2 * neg_below + neg);
        neg_below += neg;
    }
    Ok(doubled_wins as f64 / (2 * n_pos as u128 * n_neg as u128) as f64)
}

/// Average precision: `sum_k (R_k - R_{k-1}) * P_k` over a descending
/// threshold sweep where equal scores enter together.
pub fn average_precision(scores: &[f64], labels: &[u8]) -> Result<f64> {
    let (n_pos, _) = class_counts(scores, labels)?;
    let (order, groups) = tie_groups(scores);
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut ap = 0.0;
    for g in groups.into_iter().rev() {
        let pos = order[g.clone()].iter().filter(|&&i| labels[i] == 1).count();
        tp += pos;
        seen += g.len();
        if pos > 0 {
            let recall_step = pos as f64 / n_pos as f64;
            ap += recall_step * (tp as f64 / seen as f64);
        }
    }
    Ok(ap)
}

pub fn evaluate(scores: &[f64], labels: &[u8]) -> Result<MetricReport> {
    let (n_pos, n_neg) = class_counts(scores, labels)?;
    Ok(MetricReport {
        roc_auc: roc_auc(scores, labels)?,
        average_precision: average_precision(scores, labels)?,
        n_pos,
        n_neg,
    })
}
