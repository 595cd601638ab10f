//! k-nearest-neighbour baselines: majority-vote classification,
//! distance-weighted classification and distance-weighted regression.
//!
//! Neighbour `i` is weighted by `1 / d_i`. A neighbour at distance zero has
//! infinite weight, so whenever one is present the decision is taken from
//! the zero-distance neighbours alone.

use thiserror::Error;

use crate::data::DataSet;
use crate::distance::{DistanceError, DistanceSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeighborError {
    #[error("k must be between 1 and the training size {len}, got {k}")]
    InvalidK { k: usize, len: usize },
    #[error("training data must be labelled")]
    Unlabeled,
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
    /// `1 / distance`; `+inf` at distance zero.
    pub weight: f64,
}

/// The `k` nearest training points, ascending by distance, ties in
/// training order.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList(pub Vec<Neighbor>);

impl NeighborList {
    pub fn iter(&self) -> std::slice::Iter<'_, Neighbor> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn has_exact_match(&self) -> bool {
        self.0.first().is_some_and(|n| n.distance == 0.0)
    }
}

/// A real-valued training point for regression.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionExample {
    pub features: Vec<f64>,
    pub target: f64,
}

fn nearest_in<'a, I>(points: I, len: usize, x: &[f64], k: usize, spec: &DistanceSpec) -> Result<NeighborList, NeighborError>
where
    I: Iterator<Item = &'a [f64]>,
{
    if k == 0 || k > len {
        return Err(NeighborError::InvalidK { k, len });
    }
    spec.validate()?;
    let mut all = points
        .enumerate()
        .map(|(index, p)| {
            let distance = spec.eval(p, x)?;
            Ok(Neighbor {
                index,
                distance,
                weight: distance.recip(),
            })
        })
        .collect::<Result<Vec<_>, DistanceError>>()?;
    // Stable sort keeps training order among equal distances.
    all.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    all.truncate(k);
    Ok(NeighborList(all))
}

pub fn k_nearest(train: &DataSet, x: &[f64], k: usize, spec: &DistanceSpec) -> Result<NeighborList, NeighborError> {
    nearest_in(
        train.examples().iter().map(|e| e.features.as_slice()),
        train.len(),
        x,
        k,
        spec,
    )
}

fn argmax_lowest(scores: &[f64]) -> usize {
    let mut best = 0;
    for (c, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = c;
        }
    }
    best
}

fn labeled(train: &DataSet) -> Result<(), NeighborError> {
    if train.classes_known() {
        Ok(())
    } else {
        Err(NeighborError::Unlabeled)
    }
}

/// Majority label among the `k` nearest; ties go to the lowest class index.
pub fn knn_classify(train: &DataSet, x: &[f64], k: usize, spec: &DistanceSpec) -> Result<usize, NeighborError> {
    labeled(train)?;
    let nn = k_nearest(train, x, k, spec)?;
    let mut votes = vec![0.0; train.n_classes()];
    for n in nn.iter() {
        votes[train.label(n.index)] += 1.0;
    }
    Ok(argmax_lowest(&votes))
}

pub fn dwknn_classify(train: &DataSet, x: &[f64], k: usize, spec: &DistanceSpec) -> Result<usize, NeighborError> {
    labeled(train)?;
    let nn = k_nearest(train, x, k, spec)?;
    let mut votes = vec![0.0; train.n_classes()];
    if nn.has_exact_match() {
        for n in nn.iter().filter(|n| n.distance == 0.0) {
            votes[train.label(n.index)] += 1.0;
        }
    } else {
        for n in nn.iter() {
            votes[train.label(n.index)] += n.weight;
        }
    }
    Ok(argmax_lowest(&votes))
}

/// Weighted mean of the `k` nearest targets; the plain mean of the
/// zero-distance targets when any exist.
pub fn dwknn_regress(train: &[RegressionExample], x: &[f64], k: usize, spec: &DistanceSpec) -> Result<f64, NeighborError> {
    let nn = nearest_in(train.iter().map(|e| e.features.as_slice()), train.len(), x, k, spec)?;
    if nn.has_exact_match() {
        let exact: Vec<f64> = nn.iter().filter(|n| n.distance == 0.0).map(|n| train[n.index].target).collect();
        return Ok(exact.iter().sum::<f64>() / exact.len() as f64);
    }
    let (num, den) = nn.iter().fold((0.0, 0.0), |(num, den), n| {
        (num + n.weight * train[n.index].target, den + n.weight)
    });
    Ok(num / den)
}
