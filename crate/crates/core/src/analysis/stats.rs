use crate::{Error, Result};

/// 1-based ranks; tied values share the average of the ranks they span.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank correlation: Pearson correlation of fractional ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let ra = fractional_ranks(a);
    let rb = fractional_ranks(b);
    let mean = (a.len() + 1) as f64 / 2.0;
    let (mut cov, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        var_a += (x - mean) * (x - mean);
        var_b += (y - mean) * (y - mean);
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((cov / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0))
}

/// Index-aligned `(exact, approx)` pairs for 45° comparison plots.
pub fn scatter_pairs(exact: &[f64], approx: &[f64]) -> Result<Vec<(f64, f64)>> {
    if exact.len() != approx.len() {
        return Err(Error::InvalidArgument(format!(
            "vectors of length {} and {}",
            exact.len(),
            approx.len()
        )));
    }
    Ok(exact.iter().copied().zip(approx.iter().copied()).collect())
}
