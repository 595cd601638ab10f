//! Pairwise distances between feature vectors.
//!
//! Three measures are supported:
//!
//! * Euclidean distance.
//! * The Minkowski `L_p` measure for any real `p > 0`. For `p < 1` this is not
//!   a metric (the triangle inequality fails) but it is still usable as a
//!   nearest-neighbour dissimilarity.
//! * The Euclidean distance in the feature space induced by the polynomial
//!   kernel `K(a, b) = (<a, b> + c)^d`, evaluated in dual form as
//!   `sqrt(K(a, a) - 2 K(a, b) + K(b, b))` without building the features.
//!
//! Every function here is symmetric bit-for-bit: `d(a, b)` and `d(b, a)`
//! produce the same `f64`. The strangeness cache relies on this when it
//! compares incrementally updated distances against full recomputation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistanceError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("minkowski exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("polynomial kernel degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("polynomial kernel constant must be finite, got {0}")]
    InvalidConstant(f64),
    #[error("cannot parse distance spec {0:?}: expected euclidean, minkowski:<p> or poly:<d>:<c>")]
    Parse(String),
    #[error("feature count C({n}, {k}) overflows 128-bit integers")]
    Overflow { n: u64, k: u64 },
}

/// The distance measure used by every nearest-neighbour routine.
///
/// The textual form (`euclidean`, `minkowski:<p>`, `poly:<d>:<c>`) is what the
/// CLI, the cache file header and the grid service accept.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DistanceSpec {
    #[default]
    Euclidean,
    Minkowski { p: f64 },
    PolyKernel { degree: u32, constant: f64 },
}

impl DistanceSpec {
    pub fn minkowski(p: f64) -> Result<Self, DistanceError> {
        if !(p.is_finite() && p > 0.0) {
            return Err(DistanceError::InvalidExponent(p));
        }
        Ok(DistanceSpec::Minkowski { p })
    }

    pub fn poly(degree: u32, constant: f64) -> Result<Self, DistanceError> {
        if degree == 0 {
            return Err(DistanceError::InvalidDegree(degree));
        }
        if !constant.is_finite() {
            return Err(DistanceError::InvalidConstant(constant));
        }
        Ok(DistanceSpec::PolyKernel { degree, constant })
    }

    /// Checks the invariants of a spec built by hand or deserialized.
    pub fn validate(&self) -> Result<(), DistanceError> {
        match *self {
            DistanceSpec::Euclidean => Ok(()),
            DistanceSpec::Minkowski { p } => Self::minkowski(p).map(|_| ()),
            DistanceSpec::PolyKernel { degree, constant } => {
                Self::poly(degree, constant).map(|_| ())
            }
        }
    }

    /// Advisory flag: whether the measure satisfies the metric axioms.
    ///
    /// Minkowski with `p < 1` breaks the triangle inequality; a polynomial
    /// kernel with negative constant is not positive semi-definite, so its
    /// dual-form distance is only a clamped dissimilarity.
    pub fn is_metric(&self) -> bool {
        match *self {
            DistanceSpec::Euclidean => true,
            DistanceSpec::Minkowski { p } => p >= 1.0,
            DistanceSpec::PolyKernel { constant, .. } => constant >= 0.0,
        }
    }

    /// True for the measures that scale linearly with their inputs.
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, DistanceSpec::PolyKernel { .. })
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> Result<f64, DistanceError> {
        check_dims(a, b)?;
        Ok(self.eval_unchecked(a, b))
    }

    /// Same as [`DistanceSpec::eval`] without the dimension check. Callers
    /// must guarantee `a.len() == b.len()` and a validated spec.
    pub(crate) fn eval_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            DistanceSpec::Euclidean => euclidean_unchecked(a, b),
            DistanceSpec::Minkowski { p } => minkowski_unchecked(a, b, p),
            DistanceSpec::PolyKernel { degree, constant } => {
                kernel_distance_unchecked(a, b, degree, constant)
            }
        }
    }
}

impl fmt::Display for DistanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceSpec::Euclidean => f.write_str("euclidean"),
            DistanceSpec::Minkowski { p } => write!(f, "minkowski:{p}"),
            DistanceSpec::PolyKernel { degree, constant } => write!(f, "poly:{degree}:{constant}"),
        }
    }
}

impl FromStr for DistanceSpec {
    type Err = DistanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = || DistanceError::Parse(s.to_string());
        let mut parts = s.trim().split(':');
        let head = parts.next().unwrap_or_default().to_ascii_lowercase();
        let rest: Vec<&str> = parts.collect();
        match (head.as_str(), rest.as_slice()) {
            ("euclidean", []) => Ok(DistanceSpec::Euclidean),
            ("minkowski", [p]) => DistanceSpec::minkowski(parse_exponent(p).ok_or_else(parse_err)?),
            ("poly", [d, c]) => {
                let degree = d.trim().parse::<u32>().map_err(|_| parse_err())?;
                let constant = c.trim().parse::<f64>().map_err(|_| parse_err())?;
                DistanceSpec::poly(degree, constant)
            }
            _ => Err(parse_err()),
        }
    }
}

/// Accepts decimals and simple fractions such as `1/3`.
fn parse_exponent(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            Some(num / den)
        }
        None => s.parse().ok(),
    }
}

impl TryFrom<String> for DistanceSpec {
    type Error = DistanceError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<DistanceSpec> for String {
    fn from(spec: DistanceSpec) -> String {
        spec.to_string()
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<(), DistanceError> {
    if a.len() != b.len() {
        return Err(DistanceError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64, DistanceError> {
    check_dims(a, b)?;
    Ok(euclidean_unchecked(a, b))
}

fn euclidean_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Minkowski `L_p` distance, `(sum |a_i - b_i|^p)^(1/p)`.
///
/// `p = 2` delegates to [`euclidean`] so the two specs agree exactly, and
/// `p = 1` is the plain city-block sum. Other integral exponents use `powi`;
/// only non-integral exponents go through `powf`.
pub fn minkowski(a: &[f64], b: &[f64], p: f64) -> Result<f64, DistanceError> {
    check_dims(a, b)?;
    if !(p.is_finite() && p > 0.0) {
        return Err(DistanceError::InvalidExponent(p));
    }
    Ok(minkowski_unchecked(a, b, p))
}

fn minkowski_unchecked(a: &[f64], b: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        return euclidean_unchecked(a, b);
    }
    if p == 1.0 {
        return a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    }
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    let sum: f64 = if p.fract() == 0.0 && p <= i32::MAX as f64 {
        let e = p as i32;
        diffs.map(|d| d.powi(e)).sum()
    } else {
        diffs.map(|d| d.powf(p)).sum()
    };
    sum.powf(p.recip())
}

/// Polynomial kernel `(<a, b> + c)^d`.
pub fn poly_kernel(a: &[f64], b: &[f64], degree: u32, constant: f64) -> Result<f64, DistanceError> {
    check_dims(a, b)?;
    Ok(poly_kernel_unchecked(a, b, degree, constant))
}

fn poly_kernel_unchecked(a: &[f64], b: &[f64], degree: u32, constant: f64) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    powu(dot + constant, degree)
}

fn powu(base: f64, exp: u32) -> f64 {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(exp as f64),
    }
}

/// Euclidean distance in the polynomial-kernel feature space, in dual form.
///
/// Negative squared distances (rounding, or a non-PSD kernel when `c < 0`)
/// clamp to zero.
pub fn kernel_distance(
    a: &[f64],
    b: &[f64],
    degree: u32,
    constant: f64,
) -> Result<f64, DistanceError> {
    check_dims(a, b)?;
    Ok(kernel_distance_unchecked(a, b, degree, constant))
}

fn kernel_distance_unchecked(a: &[f64], b: &[f64], degree: u32, constant: f64) -> f64 {
    let kaa = poly_kernel_unchecked(a, a, degree, constant);
    let kbb = poly_kernel_unchecked(b, b, degree, constant);
    let kab = poly_kernel_unchecked(a, b, degree, constant);
    // kaa + kbb is commutative in IEEE arithmetic, so swapping a and b
    // yields the identical value.
    let sq = (kaa + kbb) - 2.0 * kab;
    sq.max(0.0).sqrt()
}

/// Number of distinct monomial features of a degree-`d` polynomial kernel
/// over `n` inputs: `C(n+d, d)` with a constant term, `C(n+d-1, d)` without.
pub fn poly_feature_count(n: u64, degree: u64, with_constant: bool) -> Result<u128, DistanceError> {
    let top = if with_constant { n + degree } else { (n + degree).saturating_sub(1) };
    binomial(top, degree)
}

fn binomial(n: u64, k: u64) -> Result<u128, DistanceError> {
    if k > n {
        return Ok(0);
    }
    let k_small = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k_small as u128 {
        // acc * (n - k_small + i) is always divisible by i at this point.
        let factor = n as u128 - k_small as u128 + i;
        acc = acc
            .checked_mul(factor)
            .ok_or(DistanceError::Overflow { n, k })?
            / i;
    }
    Ok(acc)
}
