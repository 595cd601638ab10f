//! Transductive confidence machine over k-nearest-neighbour strangeness.
//!
//! The strangeness of a labelled example is the sum of its `k` smallest
//! distances to examples of the same class divided by the sum of its `k`
//! smallest distances to examples of any other class. To classify a query
//! `x`, every class `j` is tried as its label: the strangeness of each
//! training example is revised with `x` added to the bag, `x`'s own
//! strangeness under `j` is computed, and the p-value for `j` is the
//! fraction of the `l + 1` values at least as strange as `x`'s.
//!
//! Distances among training examples never change between queries, so the
//! `k` smallest same-class and other-class distances of each training
//! example are computed once and kept in a [`StrangenessCache`]. A query
//! only revises the entries it lands inside of, on a per-hypothesis scratch
//! copy. The cache can be persisted and reloaded.

mod cache;
mod loo;
mod model;
mod strangeness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::DataSet;
use crate::distance::{DistanceError, DistanceSpec};

pub use cache::{deserialize_cache, fingerprint, serialize_cache, CacheEntry, StrangenessCache};
pub use loo::LeaveOneOutTable;
pub use model::{classify, TcmModel};
pub use strangeness::{alpha_from_sums, p_value, prediction_from_pvalues, ClassPValues, Prediction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcmConfig {
    pub k: usize,
    pub spec: DistanceSpec,
}

impl TcmConfig {
    pub fn new(k: usize, spec: DistanceSpec) -> Self {
        TcmConfig { k, spec }
    }

    /// Checks `k` and the spec against a labelled training set: `k >= 1`,
    /// at least two classes, no empty class, and `k` no larger than the
    /// smallest class.
    pub fn validate_for(&self, train: &DataSet) -> Result<(), TcmError> {
        self.validate_for_counts(train, 0)
    }

    /// Like [`TcmConfig::validate_for`], with every class allowed to shrink by
    /// `slack` examples (one for leave-one-out folds).
    pub(crate) fn validate_for_counts(&self, train: &DataSet, slack: usize) -> Result<(), TcmError> {
        self.spec.validate()?;
        if self.k == 0 {
            return Err(TcmError::InvalidK);
        }
        if !train.classes_known() {
            return Err(TcmError::Unlabeled);
        }
        if train.n_classes() < 2 {
            return Err(TcmError::TooFewClasses(train.n_classes()));
        }
        let counts = train.class_counts();
        for (class, &count) in counts.iter().enumerate() {
            if count == 0 {
                return Err(TcmError::EmptyClass { class });
            }
        }
        let (class, &smallest) = counts
            .iter()
            .enumerate()
            .min_by_key(|&(_, c)| *c)
            .expect("at least two classes");
        let usable = smallest.saturating_sub(slack);
        if self.k > usable {
            return Err(TcmError::KTooLarge {
                k: self.k,
                class,
                size: usable,
            });
        }
        Ok(())
    }
}

impl Default for TcmConfig {
    fn default() -> Self {
        TcmConfig {
            k: 1,
            spec: DistanceSpec::Euclidean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TcmError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("k = {k} exceeds the size {size} of class {class}, the smallest class")]
    KTooLarge { k: usize, class: usize, size: usize },
    #[error("class {class} has no training examples")]
    EmptyClass { class: usize },
    #[error("need at least two classes, found {0}")]
    TooFewClasses(usize),
    #[error("training data must be labelled")]
    Unlabeled,
    #[error("query has {found} attributes, training data has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cache does not match the training data and configuration: {0}")]
    CacheMismatch(String),
    #[error("malformed cache file at line {line}: {reason}")]
    MalformedCache { line: usize, reason: String },
    #[error(transparent)]
    Distance(#[from] DistanceError),
}
