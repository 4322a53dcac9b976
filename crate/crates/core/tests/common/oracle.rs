//! Brute-force reference scorer: linear-scan ECDF counts and a literal
//! evaluation of the scoring recipe. O(n^2 d); test use only.

/// Per-variant scores in the order left, right, two_tails, skew_corrected, max.
pub type VariantScores = [f64; 5];

pub fn literal_skewness(column: &[f64]) -> f64 {
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let third = column.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let var = column.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let denom = var.sqrt().powi(3);
    if column.iter().all(|&x| x == column[0]) || denom == 0.0 {
        0.0
    } else {
        third / denom
    }
}

/// `(u, v, w)` per dimension for `query` against the training rows.
pub fn brute_observations(train: &[Vec<f64>], query: &[f64]) -> Vec<(f64, f64, f64)> {
    let n = train.len() as f64;
    let floor = 1.0 / (n + 1.0);
    (0..query.len())
        .map(|j| {
            let column: Vec<f64> = train.iter().map(|r| r[j]).collect();
            let le = column.iter().filter(|&&s| s <= query[j]).count() as f64;
            let neg_le = column.iter().filter(|&&s| -s <= -query[j]).count() as f64;
            let u = (le / n).max(floor);
            let v = (neg_le / n).max(floor);
            let w = if literal_skewness(&column) < 0.0 { u } else { v };
            (u, v, w)
        })
        .collect()
}

pub fn brute_scores(train: &[Vec<f64>], query: &[f64]) -> VariantScores {
    let obs = brute_observations(train, query);
    let p_l: f64 = obs.iter().map(|o| -o.0.ln()).sum();
    let p_r: f64 = obs.iter().map(|o| -o.1.ln()).sum();
    let p_s: f64 = obs.iter().map(|o| -o.2.ln()).sum();
    [p_l, p_r, (p_l + p_r) / 2.0, p_s, p_l.max(p_r).max(p_s)]
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300) || a == b
}
