use serde::{Deserialize, Serialize};

use super::EvalError;

/// Risk of malignancy index, the clinical baseline for ovarian masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmiResult {
    pub score: f64,
    /// `score > 200`.
    pub at_risk: bool,
}

pub fn rmi_index(menopausal: f64, ultrasound: f64, ca125: f64) -> Result<RmiResult, EvalError> {
    if [menopausal, ultrasound, ca125].iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(EvalError::NegativeRmiInput);
    }
    let score = menopausal * ultrasound * ca125;
    Ok(RmiResult {
        score,
        at_risk: score > 200.0,
    })
}
