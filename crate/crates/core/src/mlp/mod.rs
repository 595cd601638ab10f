//! Fully connected feed-forward network with logistic units, trained by
//! single-example (stochastic) backpropagation of the squared error.
//!
//! Used as a baseline classifier with one output unit per class, and to
//! build augmented datasets from hidden-layer activations.

mod io;
mod network;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{read_weights, write_weights};
pub use network::{Gradients, Layer, Mlp, TrainingTrace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MlpError {
    #[error("invalid network configuration: {0}")]
    InvalidConfig(String),
    #[error("input has {found} values, network expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dataset has {classes} classes, network has {outputs} outputs")]
    OutputMismatch { classes: usize, outputs: usize },
    #[error("training set is empty")]
    EmptyTrain,
    #[error("training data must be labelled")]
    Unlabeled,
    #[error("no hidden layer {index}: network has {hidden} hidden layers")]
    InvalidLayer { index: usize, hidden: usize },
    #[error("malformed weight file at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    /// Input width, hidden widths, output width (one unit per class).
    pub layer_sizes: Vec<usize>,
    pub eta: f64,
    /// Initial weights and biases are uniform in `±init_range`.
    pub init_range: f64,
    /// Multiplicative shrinkage `w *= 1 - weight_decay` after every update.
    pub weight_decay: f64,
    pub target_on: f64,
    pub target_off: f64,
    /// Per-class replacement for `target_on`.
    pub per_class_target_on: BTreeMap<usize, f64>,
    /// Number of single-example weight updates.
    pub updates: usize,
    pub trace_every: usize,
    pub seed: u64,
}

impl MlpConfig {
    pub fn new(layer_sizes: Vec<usize>) -> Self {
        MlpConfig {
            layer_sizes,
            ..MlpConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), MlpError> {
        let bad = |msg: &str| Err(MlpError::InvalidConfig(msg.to_string()));
        if self.layer_sizes.len() < 2 {
            return bad("need at least an input and an output layer");
        }
        if self.layer_sizes.contains(&0) {
            return bad("layer sizes must be positive");
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(self.init_range.is_finite() && self.init_range >= 0.0) {
            return bad("init range must be non-negative");
        }
        if !(0.0..1.0).contains(&self.weight_decay) {
            return bad("weight decay must lie in [0, 1)");
        }
        if self.trace_every == 0 {
            return bad("trace interval must be positive");
        }
        let outputs = *self.layer_sizes.last().unwrap();
        if self.per_class_target_on.keys().any(|&c| c >= outputs) {
            return bad("per-class target refers to a missing output");
        }
        Ok(())
    }

    /// One-of-N target vector for `label`.
    pub fn encode_targets(&self, label: usize) -> Vec<f64> {
        let outputs = *self.layer_sizes.last().expect("validated config");
        let on = self.per_class_target_on.get(&label).copied().unwrap_or(self.target_on);
        (0..outputs)
            .map(|c| if c == label { on } else { self.target_off })
            .collect()
    }
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            layer_sizes: Vec::new(),
            eta: 0.1,
            init_range: 0.05,
            weight_decay: 0.0,
            target_on: 0.999,
            target_off: 0.001,
            per_class_target_on: BTreeMap::new(),
            updates: 100_000,
            trace_every: 20,
            seed: 0,
        }
    }
}
