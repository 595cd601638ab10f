//! Weight cache file.
//!
//! ```text
//! MLP v1
//! 3,5,2
//! <one line per output unit of layer 1: its incoming weights, TAB separated>
//! <one line: the biases of layer 1>
//! ... same for every following layer
//! ```

use std::fmt::Write as _;

use super::network::Layer;
use super::{Mlp, MlpError};

const MAGIC: &str = "MLP v1";

pub fn write_weights(mlp: &Mlp) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let sizes: Vec<String> = mlp.layer_sizes().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "{}", sizes.join(","));
    let row = |values: &[f64]| values.iter().map(f64::to_string).collect::<Vec<_>>().join("\t");
    for layer in mlp.layers() {
        for unit in layer.weights.chunks_exact(layer.inputs) {
            let _ = writeln!(out, "{}", row(unit));
        }
        let _ = writeln!(out, "{}", row(&layer.biases));
    }
    out
}

pub fn read_weights(text: &str) -> Result<Mlp, MlpError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    let malformed = |line: usize, reason: &str| MlpError::Malformed {
        line,
        reason: reason.to_string(),
    };

    let (no, magic) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    if magic != MAGIC {
        return Err(malformed(no, "missing MLP v1 header"));
    }
    let (no, sizes) = lines.next().ok_or_else(|| malformed(2, "missing layer sizes"))?;
    let sizes = sizes
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&v| v > 0))
        .collect::<Option<Vec<usize>>>()
        .filter(|v| v.len() >= 2)
        .ok_or_else(|| malformed(no, "bad layer sizes"))?;

    let mut read_row = |width: usize| -> Result<Vec<f64>, MlpError> {
        let (no, line) = lines.next().ok_or_else(|| malformed(0, "truncated weights"))?;
        let values = line
            .split('\t')
            .map(|v| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| malformed(no, "non-numeric weight"))?;
        if values.len() != width {
            return Err(malformed(no, &format!("expected {width} values, found {}", values.len())));
        }
        Ok(values)
    };

    let mut layers = Vec::with_capacity(sizes.len() - 1);
    for w in sizes.windows(2) {
        let (inputs, outputs) = (w[0], w[1]);
        let mut weights = Vec::with_capacity(inputs * outputs);
        for _ in 0..outputs {
            weights.extend(read_row(inputs)?);
        }
        let biases = read_row(outputs)?;
        layers.push(Layer {
            inputs,
            outputs,
            weights,
            biases,
        });
    }
    if let Some((no, _)) = lines.next() {
        return Err(malformed(no, "trailing data after last layer"));
    }
    Mlp::from_layers(layers)
}
