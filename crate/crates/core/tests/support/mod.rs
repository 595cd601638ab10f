//! Independent reference implementations used by the integration tests.
//!
//! Each oracle recomputes from scratch with the plainest possible loops;
//! none of them touches the library's caches or neighbour bookkeeping.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;
use tcmnn_core::{DataSet, DistanceSpec, SeededRng};

/// Strangeness with the documented zero-sum rules, written out again.
pub fn oracle_alpha(same: f64, other: f64) -> f64 {
    match (same == 0.0, other == 0.0) {
        (true, true) => 1.0,
        (false, true) => f64::INFINITY,
        _ => same / other,
    }
}

/// Sum of the `k` smallest values, added smallest first.
fn k_smallest_sum(mut values: Vec<f64>, k: usize) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.iter().take(k).fold(0.0, |acc, v| acc + v)
}

/// Per-class p-values by rebuilding the whole bag for every hypothesis and
/// recomputing every strangeness value.
pub fn naive_p_values(train: &DataSet, k: usize, spec: &DistanceSpec, x: &[f64]) -> Vec<f64> {
    let l = train.len();
    let mut points: Vec<(Vec<f64>, usize)> = (0..l).map(|i| (train.features(i).to_vec(), train.label(i))).collect();
    points.push((x.to_vec(), 0));
    (0..train.n_classes())
        .map(|j| {
            points[l].1 = j;
            let alphas: Vec<f64> = (0..=l)
                .map(|i| {
                    let mut same = Vec::new();
                    let mut other = Vec::new();
                    for t in 0..=l {
                        if t == i {
                            continue;
                        }
                        let d = spec.eval(&points[i].0, &points[t].0).unwrap();
                        if points[t].1 == points[i].1 {
                            same.push(d);
                        } else {
                            other.push(d);
                        }
                    }
                    oracle_alpha(k_smallest_sum(same, k), k_smallest_sum(other, k))
                })
                .collect();
            let new = alphas[l];
            alphas.iter().filter(|&&a| a >= new).count() as f64 / (l + 1) as f64
        })
        .collect()
}

/// Neighbour indices ordered by distance, then by training index.
pub fn brute_order(points: &[Vec<f64>], x: &[f64], spec: &DistanceSpec) -> Vec<(usize, f64)> {
    let mut all: Vec<(usize, f64)> = points.iter().enumerate().map(|(i, p)| (i, spec.eval(p, x).unwrap())).collect();
    all.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    all
}

fn argmax_first(scores: &[f64]) -> usize {
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    scores.iter().position(|&s| s == best).unwrap()
}

pub fn brute_knn(train: &DataSet, x: &[f64], k: usize, spec: &DistanceSpec) -> usize {
    let points: Vec<Vec<f64>> = (0..train.len()).map(|i| train.features(i).to_vec()).collect();
    let mut votes = vec![0.0; train.n_classes()];
    for (i, _) in brute_order(&points, x, spec).into_iter().take(k) {
        votes[train.label(i)] += 1.0;
    }
    argmax_first(&votes)
}

pub fn brute_dwknn(train: &DataSet, x: &[f64], k: usize, spec: &DistanceSpec) -> usize {
    let points: Vec<Vec<f64>> = (0..train.len()).map(|i| train.features(i).to_vec()).collect();
    let near: Vec<(usize, f64)> = brute_order(&points, x, spec).into_iter().take(k).collect();
    let mut votes = vec![0.0; train.n_classes()];
    let exact: Vec<usize> = near.iter().filter(|n| n.1 == 0.0).map(|n| n.0).collect();
    if exact.is_empty() {
        for (i, d) in near {
            votes[train.label(i)] += 1.0 / d;
        }
    } else {
        for i in exact {
            votes[train.label(i)] += 1.0;
        }
    }
    argmax_first(&votes)
}

pub fn brute_regress(points: &[Vec<f64>], targets: &[f64], x: &[f64], k: usize, spec: &DistanceSpec) -> f64 {
    let near: Vec<(usize, f64)> = brute_order(points, x, spec).into_iter().take(k).collect();
    let exact: Vec<f64> = near.iter().filter(|n| n.1 == 0.0).map(|n| targets[n.0]).collect();
    if !exact.is_empty() {
        return exact.iter().sum::<f64>() / exact.len() as f64;
    }
    let num: f64 = near.iter().map(|&(i, d)| targets[i] / d).sum();
    let den: f64 = near.iter().map(|&(_, d)| 1.0 / d).sum();
    num / den
}

/// All exponent vectors `(a_0, a_1, ..., a_n)` with `a_0 + ... + a_n = d`.
fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Explicit feature vector of the kernel `(a.b + c)^d`: one coordinate per
/// monomial, `sqrt(multinomial * c^a0) * prod x_i^a_i`. Coordinates whose
/// coefficient vanishes (`c = 0`, `a0 > 0`) are dropped.
pub fn monomial_features(x: &[f64], degree: u32, c: f64) -> Vec<f64> {
    compositions(x.len() + 1, degree)
        .into_iter()
        .filter(|a| c != 0.0 || a[0] == 0)
        .map(|a| {
            let multinomial = factorial(degree) / a.iter().map(|&e| factorial(e)).product::<f64>();
            let coeff = multinomial * c.powi(a[0] as i32);
            coeff.sqrt() * x.iter().zip(&a[1..]).map(|(v, &e)| v.powi(e as i32)).product::<f64>()
        })
        .collect()
}

pub fn plain_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Random labelled dataset with every class holding at least `min_per_class`
/// examples. `coarse` draws from a small grid so duplicates and ties occur.
pub fn random_dataset(rng: &mut SeededRng, l: usize, n: usize, c: usize, min_per_class: usize, coarse: bool) -> DataSet {
    assert!(l >= c * min_per_class);
    let rows = (0..l)
        .map(|i| {
            let label = if i < c * min_per_class { i % c } else { rng.below(c) };
            (random_point(rng, n, coarse), label)
        })
        .collect();
    DataSet::labeled("random", c, rows).unwrap()
}

pub fn random_point(rng: &mut SeededRng, n: usize, coarse: bool) -> Vec<f64> {
    (0..n)
        .map(|_| if coarse { rng.below(5) as f64 * 0.25 } else { rng.symmetric(1.0) })
        .collect()
}

pub fn random_spec(rng: &mut SeededRng) -> DistanceSpec {
    match rng.below(3) {
        0 => DistanceSpec::Euclidean,
        1 => DistanceSpec::minkowski([0.5, 1.0, 1.5, 3.0][rng.below(4)]).unwrap(),
        _ => DistanceSpec::poly(1 + rng.below(3) as u32, [0.0, 0.5, 1.0][rng.below(3)]).unwrap(),
    }
}

/// Two spherical Gaussian clusters in `n` dimensions, centres `gap` apart,
/// alternating labels.
pub fn two_clusters(seed: u64, l: usize, n: usize, gap: f64) -> DataSet {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let rows = (0..l)
        .map(|i| {
            let label = i % 2;
            let x = (0..n)
                .map(|d| {
                    let z: f64 = rng.sample(StandardNormal);
                    z + if d == 0 && label == 1 { gap } else { 0.0 }
                })
                .collect();
            (x, label)
        })
        .collect();
    DataSet::labeled("clusters", 2, rows).unwrap()
}

pub fn load_wbc() -> DataSet {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/wbc683.data");
    tcmnn_core::data::read_data_file(&std::fs::read(path).unwrap()).unwrap()
}
