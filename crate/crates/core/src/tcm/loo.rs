use rayon::prelude::*;

use super::cache::CacheEntry;
use super::{StrangenessCache, TcmConfig, TcmError, TcmModel};
use crate::data::DataSet;

/// Neighbour lists of a full dataset from which the strangeness cache of
/// any leave-one-out fold is derived without recomputing distances.
///
/// Each example keeps its `k + 1` nearest same-class and other-class
/// neighbours. Dropping example `i` from a list that contains it leaves
/// the `k` nearest among the remaining examples.
#[derive(Debug, Clone)]
pub struct LeaveOneOutTable {
    config: TcmConfig,
    same: Vec<Vec<(usize, f64)>>,
    other: Vec<Vec<(usize, f64)>>,
}

impl LeaveOneOutTable {
    /// Requires every fold to satisfy the class-size check, i.e. `k` at most
    /// one less than the smallest class.
    pub fn build(data: &DataSet, config: &TcmConfig) -> Result<Self, TcmError> {
        config.validate_for_counts(data, 1)?;
        let l = data.len();
        let keep = config.k + 1;
        let (same, other) = (0..l)
            .into_par_iter()
            .map(|i| {
                let xi = data.features(i);
                let yi = data.label(i);
                let mut same = Vec::new();
                let mut other = Vec::new();
                for t in (0..l).filter(|&t| t != i) {
                    let d = config.spec.eval_unchecked(xi, data.features(t));
                    if data.label(t) == yi {
                        same.push((t, d));
                    } else {
                        other.push((t, d));
                    }
                }
                (nearest(same, keep), nearest(other, keep))
            })
            .unzip();
        Ok(LeaveOneOutTable {
            config: *config,
            same,
            other,
        })
    }

    /// Model trained on every example except `held_out`.
    pub fn fold(&self, data: &DataSet, held_out: usize) -> TcmModel {
        let k = self.config.k;
        let pick = |list: &[(usize, f64)]| -> Vec<f64> {
            list.iter()
                .filter(|(t, _)| *t != held_out)
                .take(k)
                .map(|&(_, d)| d)
                .collect()
        };
        let entries = (0..data.len())
            .filter(|&t| t != held_out)
            .map(|t| CacheEntry::new(data.label(t), pick(&self.same[t]), pick(&self.other[t])))
            .collect();
        let train = data.without(held_out);
        let cache = StrangenessCache::from_entries(&train, &self.config, entries);
        TcmModel::from_parts(train, self.config, cache)
    }
}

/// `keep` nearest `(index, distance)` pairs, ascending by distance then index.
fn nearest(mut pool: Vec<(usize, f64)>, keep: usize) -> Vec<(usize, f64)> {
    let cmp = |a: &(usize, f64), b: &(usize, f64)| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0));
    if pool.len() > keep {
        pool.select_nth_unstable_by(keep, cmp);
        pool.truncate(keep);
    }
    pool.sort_unstable_by(cmp);
    pool
}
