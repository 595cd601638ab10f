use super::cache::{ascending_sum, k_smallest};
use super::{alpha_from_sums, prediction_from_pvalues, ClassPValues, Prediction, StrangenessCache, TcmConfig, TcmError};
use crate::data::DataSet;

/// A training set bundled with its validated strangeness cache.
#[derive(Debug, Clone)]
pub struct TcmModel {
    train: DataSet,
    config: TcmConfig,
    cache: StrangenessCache,
}

impl TcmModel {
    /// Validates the configuration and builds the cache.
    pub fn fit(train: DataSet, config: TcmConfig) -> Result<Self, TcmError> {
        let cache = StrangenessCache::build(&train, &config)?;
        Ok(TcmModel { train, config, cache })
    }

    /// Reuses a previously built (or loaded) cache after checking it matches.
    pub fn with_cache(train: DataSet, config: TcmConfig, cache: StrangenessCache) -> Result<Self, TcmError> {
        config.validate_for(&train)?;
        cache.check_matches(&train, &config)?;
        Ok(TcmModel { train, config, cache })
    }

    /// Skips validation; the caller guarantees the cache belongs to `train`.
    pub(crate) fn from_parts(train: DataSet, config: TcmConfig, cache: StrangenessCache) -> Self {
        TcmModel { train, config, cache }
    }

    pub fn train(&self) -> &DataSet {
        &self.train
    }

    pub fn config(&self) -> &TcmConfig {
        &self.config
    }

    pub fn cache(&self) -> &StrangenessCache {
        &self.cache
    }

    pub fn classify(&self, x: &[f64]) -> Result<(Prediction, ClassPValues), TcmError> {
        let p = self.p_values(x)?;
        Ok((prediction_from_pvalues(&p), p))
    }

    /// One p-value per hypothesised class of `x`.
    pub fn p_values(&self, x: &[f64]) -> Result<ClassPValues, TcmError> {
        let train = &self.train;
        if x.len() != train.n_attributes() {
            return Err(TcmError::DimensionMismatch {
                expected: train.n_attributes(),
                found: x.len(),
            });
        }
        let k = self.config.k;
        let spec = self.config.spec;
        let n_classes = train.n_classes();
        let l = train.len();

        let dists: Vec<f64> = train
            .examples()
            .iter()
            .map(|ex| spec.eval_unchecked(x, &ex.features))
            .collect();

        let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); n_classes];
        for (t, &d) in dists.iter().enumerate() {
            per_class[train.label(t)].push(d);
        }
        let per_class: Vec<Vec<f64>> = per_class.into_iter().map(|v| k_smallest(v, k)).collect();

        let entries = self.cache.entries();
        let mut p = Vec::with_capacity(n_classes);
        for j in 0..n_classes {
            let same_new = &per_class[j];
            let other_new = k_smallest(
                per_class
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .flat_map(|(_, v)| v.iter().copied())
                    .collect(),
                k,
            );
            let alpha_new = alpha_from_sums(ascending_sum(same_new), ascending_sum(&other_new));

            let mut at_least = 1usize;
            for (e, &d) in entries.iter().zip(&dists) {
                let alpha = if e.label == j {
                    merged_sum(&e.same_k, d, k).map_or(e.alpha_base, |s| alpha_from_sums(s, e.other_sum))
                } else {
                    merged_sum(&e.other_k, d, k).map_or(e.alpha_base, |o| alpha_from_sums(e.same_sum, o))
                };
                if alpha >= alpha_new {
                    at_least += 1;
                }
            }
            p.push(at_least as f64 / (l + 1) as f64);
        }
        Ok(ClassPValues(p))
    }
}

/// Sum of the `k` smallest of `sorted ∪ {d}` when `d` enters that set,
/// `None` when the stored list is full and `d` is not below its last entry.
fn merged_sum(sorted: &[f64], d: f64, k: usize) -> Option<f64> {
    if sorted.len() >= k && d >= sorted[k - 1] {
        return None;
    }
    let mut acc = 0.0;
    let mut taken = 0;
    let mut inserted = false;
    for &v in sorted {
        if taken == k {
            break;
        }
        if !inserted && d < v {
            acc += d;
            inserted = true;
            taken += 1;
            if taken == k {
                break;
            }
        }
        acc += v;
        taken += 1;
    }
    if !inserted && taken < k {
        acc += d;
    }
    Some(acc)
}

/// Classifies `x` against `train` with a cache, checking the cache first.
pub fn classify(
    train: &DataSet,
    cache: &StrangenessCache,
    config: &TcmConfig,
    x: &[f64],
) -> Result<(Prediction, ClassPValues), TcmError> {
    config.validate_for(train)?;
    cache.check_matches(train, config)?;
    // The model takes ownership; cloning keeps this entry point borrow-only.
    TcmModel::from_parts(train.clone(), *config, cache.clone()).classify(x)
}
