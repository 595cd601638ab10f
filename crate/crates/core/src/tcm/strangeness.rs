use serde::{Deserialize, Serialize};

/// Strangeness of an example from its summed same-class and other-class
/// nearest distances.
///
/// Zero sums follow fixed rules: `(0, s > 0) -> 0`, `(s > 0, 0) -> +inf`,
/// `(0, 0) -> 1`.
pub fn alpha_from_sums(same_sum: f64, other_sum: f64) -> f64 {
    if other_sum > 0.0 {
        same_sum / other_sum
    } else if same_sum > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Fraction of `alphas ∪ {alpha_new}` at least as strange as `alpha_new`.
///
/// Comparisons are exact; `+inf >= +inf` holds.
pub fn p_value(alphas: &[f64], alpha_new: f64) -> f64 {
    let at_least = alphas.iter().filter(|&&a| a >= alpha_new).count() + 1;
    at_least as f64 / (alphas.len() + 1) as f64
}

/// One p-value per class, indexed by class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassPValues(pub Vec<f64>);

impl ClassPValues {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: usize,
    pub confidence: f64,
    pub credibility: f64,
}

/// Predicts the class with the largest p-value (lowest index on ties).
///
/// Credibility is the largest p-value, confidence is one minus the second
/// largest. With a single class the second largest is taken as zero.
pub fn prediction_from_pvalues(p: &ClassPValues) -> Prediction {
    let mut label = 0;
    for (j, &v) in p.0.iter().enumerate() {
        if v > p.0[label] {
            label = j;
        }
    }
    let credibility = p.0.get(label).copied().unwrap_or(0.0);
    let second = p
        .0
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label)
        .map(|(_, &v)| v)
        .fold(0.0f64, f64::max);
    Prediction {
        label,
        confidence: 1.0 - second,
        credibility,
    }
}
