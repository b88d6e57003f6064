//! Deterministic reductions and order statistics.
//!
//! Exposure accumulation must not depend on how work was scheduled, so every
//! mean/sum reduction routes through a fixed-shape pairwise summation and
//! quantiles sort a copy with a total order.

/// Pairwise (cascade) summation with a fixed recursion shape.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut s = 0.0;
        for x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    assert!(xs.len() >= 2);
    let m = mean(xs);
    let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&dev) / (xs.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn mean_standard_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Sorts a copy ascending under the IEEE total order.
pub fn sorted_copy(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Quantile with linear interpolation between order statistics (the
/// "type 7" estimator): h = (n-1)p, result = x_(floor h) interpolated.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    assert!((0.0..=1.0).contains(&p), "quantile level {p} outside [0,1]");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

pub fn quantile(xs: &[f64], p: f64) -> f64 {
    quantile_sorted(&sorted_copy(xs), p)
}
