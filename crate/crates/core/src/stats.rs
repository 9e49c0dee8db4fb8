//! Statistical checks used to compare sampled data with the exact oracle.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{arg, Result};

/// Outcome of a χ² goodness-of-fit test.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Number of bins after merging.
    pub bins: usize,
}

/// χ² goodness of fit of `observed` counts against `expected` probabilities.
///
/// Consecutive bins are merged until each has an expected count of at least
/// `min_expected`; a short remainder is folded into the last merged bin.
pub fn chi_square_test(observed: &[u64], expected: &[f64], min_expected: f64) -> Result<ChiSquareTest> {
    if observed.len() != expected.len() || observed.is_empty() {
        return arg("observed and expected bins must have the same non-zero length");
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return arg("no observations");
    }
    let mass: f64 = expected.iter().sum();
    if !(mass > 0.0) {
        return arg("expected probabilities must have positive mass");
    }
    let n = total as f64;
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob as f64;
        e += ex / mass * n;
        if e >= min_expected {
            merged.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => merged.push((o, e)),
        }
    }
    let statistic: f64 = merged.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let bins = merged.len();
    let degrees_of_freedom = bins.saturating_sub(1);
    let p_value = if degrees_of_freedom == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(degrees_of_freedom as f64).expect("positive degrees of freedom");
        dist.sf(statistic)
    };
    Ok(ChiSquareTest {
        statistic,
        degrees_of_freedom,
        p_value,
        bins,
    })
}

/// `½ Σ |p_i − q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Geometric probabilities `P(k) = (1−p)^{k−1} p` for `k = 1..=max_k`, with
/// the tail `P(k > max_k)` added to the last entry.
pub fn geometric_probabilities(p: f64, max_k: usize) -> Vec<f64> {
    let mut probs: Vec<f64> = (1..=max_k).map(|k| (1.0 - p).powi(k as i32 - 1) * p).collect();
    if let Some(last) = probs.last_mut() {
        *last += (1.0 - p).powi(max_k as i32);
    }
    probs
}

/// Standard error of a binomial frequency.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Lag-1 autocorrelation, or `None` when the series has zero variance.
pub fn lag1_autocorrelation(series: &[f64]) -> Option<f64> {
    if series.len() < 2 {
        return None;
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var: f64 = series.iter().map(|x| (x - mean) * (x - mean)).sum();
    if var <= f64::EPSILON * n * (1.0 + mean * mean) {
        return None;
    }
    let cov: f64 = series.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
    Some(cov / var)
}

/// Least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}
