use serde::{Deserialize, Serialize};

use super::{DataError, DataSet};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_count: usize,
    pub seed: u64,
}

/// Draws `test_count` examples without replacement into a test set.
///
/// Selection is a partial Fisher-Yates shuffle of the index vector driven by
/// [`SeededRng::below`]. Both halves keep the original relative order.
pub fn random_split(ds: &DataSet, spec: SplitSpec) -> Result<(DataSet, DataSet), DataError> {
    if !ds.classes_known() {
        return Err(DataError::Unlabeled);
    }
    let l = ds.len();
    if spec.test_count == 0 || spec.test_count >= l {
        return Err(DataError::InvalidSplit {
            test_count: spec.test_count,
            len: l,
        });
    }
    let (train_idx, test_idx) = split_indices(l, spec);
    Ok((
        ds.subset(format!("{}-train", ds.name), &train_idx),
        ds.subset(format!("{}-test", ds.name), &test_idx),
    ))
}

pub(crate) fn split_indices(l: usize, spec: SplitSpec) -> (Vec<usize>, Vec<usize>) {
    let mut rng = SeededRng::new(spec.seed);
    let mut idx: Vec<usize> = (0..l).collect();
    for i in 0..spec.test_count {
        let j = i + rng.below(l - i);
        idx.swap(i, j);
    }
    let mut test = idx[..spec.test_count].to_vec();
    let mut train = idx[spec.test_count..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    (train, test)
}

/// Per-attribute affine map fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxScaler {
    /// Fits column minima and maxima. Returns `None` for an empty set.
    pub fn fit(train: &DataSet) -> Option<Self> {
        let first = train.examples().first()?;
        let mut min = first.features.clone();
        let mut max = first.features.clone();
        for ex in &train.examples()[1..] {
            for (j, &v) in ex.features.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Some(MinMaxScaler { min, max })
    }

    /// `(x - min) / (max - min)` per attribute; constant attributes map to 0.
    /// Values outside the fitted range land outside `[0, 1]`.
    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
            .collect()
    }

    pub fn apply(&self, ds: &DataSet) -> DataSet {
        let mut out = ds.clone();
        for ex in out.examples_mut() {
            ex.features = self.transform(&ex.features);
        }
        out
    }
}

/// Normalises `train` and every dataset in `others` with bounds fitted on
/// `train` alone.
pub fn min_max_normalize(train: &DataSet, others: &[&DataSet]) -> Result<(DataSet, Vec<DataSet>), DataError> {
    let scaler = MinMaxScaler::fit(train).ok_or(DataError::Empty)?;
    Ok((scaler.apply(train), others.iter().map(|d| scaler.apply(d)).collect()))
}
