use serde::{Deserialize, Serialize};

use super::EvalError;

/// Paired t statistic `sum(D) / sqrt((n sum(D^2) - sum(D)^2) / (n - 1))`
/// with `n - 1` degrees of freedom. No critical-value lookup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub n: usize,
    pub sum_d: f64,
    pub sum_d2: f64,
    pub t: f64,
    pub df: usize,
}

pub fn paired_t_from_sums(n: usize, sum_d: f64, sum_d2: f64) -> Result<TTestResult, EvalError> {
    if n < 2 {
        return Err(EvalError::TooFewDifferences(n));
    }
    let nf = n as f64;
    let spread = (nf * sum_d2 - sum_d * sum_d) / (nf - 1.0);
    if spread.is_nan() || spread <= 0.0 {
        return Err(EvalError::ZeroDenominator);
    }
    Ok(TTestResult {
        n,
        sum_d,
        sum_d2,
        t: sum_d / spread.sqrt(),
        df: n - 1,
    })
}

pub fn paired_t_statistic(differences: &[f64]) -> Result<TTestResult, EvalError> {
    if differences.len() < 2 {
        return Err(EvalError::TooFewDifferences(differences.len()));
    }
    // Exact test; the sums can leave rounding noise for equal inputs.
    if differences.iter().all(|&d| d == differences[0]) {
        return Err(EvalError::ZeroDenominator);
    }
    let sum_d = differences.iter().sum();
    let sum_d2 = differences.iter().map(|d| d * d).sum();
    paired_t_from_sums(differences.len(), sum_d, sum_d2)
}
