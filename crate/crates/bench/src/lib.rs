//! Shared fixtures for the benchmarks.

use tcmnn_core::{DataSet, SeededRng};

/// Two Gaussian-ish clusters of `l` points in `n` dimensions, alternating labels.
pub fn clustered(l: usize, n: usize, seed: u64) -> DataSet {
    let mut rng = SeededRng::new(seed);
    let rows = (0..l)
        .map(|i| {
            let label = i % 2;
            let centre = if label == 0 { 0.0 } else { 1.5 };
            // Sum of uniforms: cheap bell-shaped noise.
            let x = (0..n)
                .map(|_| centre + (0..4).map(|_| rng.symmetric(0.5)).sum::<f64>())
                .collect();
            (x, label)
        })
        .collect();
    DataSet::labeled(format!("clusters-{l}x{n}"), 2, rows).expect("valid fixture")
}

/// `count` random points in `n` dimensions.
pub fn queries(count: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SeededRng::new(seed);
    (0..count).map(|_| (0..n).map(|_| rng.symmetric(2.0) + 0.75).collect()).collect()
}
