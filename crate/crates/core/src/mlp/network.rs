use serde::{Deserialize, Serialize};

use super::{MlpConfig, MlpError};
use crate::data::DataSet;
use crate::rng::SeededRng;

/// Weights of one fully connected layer, row-major `outputs × inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Layer {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Layer {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            biases: vec![0.0; outputs],
        }
    }

    fn activate(&self, input: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.inputs)
            .zip(&self.biases)
            .map(|(row, b)| logistic(row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b))
            .collect()
    }
}

fn logistic(y: f64) -> f64 {
    1.0 / (1.0 + (-y).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    layers: Vec<Layer>,
}

/// Error gradient, laid out like the network's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients(pub Vec<Layer>);

impl Gradients {
    /// Weights then biases, layer by layer; same order as [`Mlp::params`].
    pub fn flatten(&self) -> Vec<f64> {
        self.0
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
            .collect()
    }
}

/// Sum of squared errors over the training set, sampled during training.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub samples: Vec<(usize, f64)>,
}

impl Mlp {
    /// New network with every weight and bias drawn uniformly from
    /// `±init_range` by the seeded generator.
    pub fn init(config: &MlpConfig) -> Result<Self, MlpError> {
        config.validate()?;
        let mut rng = SeededRng::new(config.seed);
        let layers = config
            .layer_sizes
            .windows(2)
            .map(|w| {
                let mut layer = Layer::zeros(w[0], w[1]);
                for v in layer.weights.iter_mut().chain(layer.biases.iter_mut()) {
                    *v = rng.symmetric(config.init_range);
                }
                layer
            })
            .collect();
        Ok(Mlp { layers })
    }

    pub(crate) fn from_layers(layers: Vec<Layer>) -> Result<Self, MlpError> {
        if layers.is_empty() {
            return Err(MlpError::InvalidConfig("network has no layers".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].outputs != pair[1].inputs {
                return Err(MlpError::InvalidConfig("layer shapes do not chain".into()));
            }
        }
        for l in &layers {
            if l.weights.len() != l.inputs * l.outputs || l.biases.len() != l.outputs {
                return Err(MlpError::InvalidConfig("layer buffer sizes are inconsistent".into()));
            }
        }
        Ok(Mlp { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].inputs)
            .chain(self.layers.iter().map(|l| l.outputs))
            .collect()
    }

    pub fn n_inputs(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.layers.last().map_or(0, |l| l.outputs)
    }

    pub fn n_hidden(&self) -> usize {
        self.layers.len() - 1
    }

    fn check_input(&self, x: &[f64]) -> Result<(), MlpError> {
        if x.len() != self.n_inputs() {
            return Err(MlpError::DimensionMismatch {
                expected: self.n_inputs(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Activations of every layer; index 0 is the input itself.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, MlpError> {
        self.check_input(x)?;
        Ok(self.forward_unchecked(x))
    }

    fn forward_unchecked(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(x.to_vec());
        for layer in &self.layers {
            let next = layer.activate(acts.last().unwrap());
            acts.push(next);
        }
        acts
    }

    pub fn output(&self, x: &[f64]) -> Result<Vec<f64>, MlpError> {
        Ok(self.forward(x)?.pop().unwrap())
    }

    /// Index of the largest output, lowest index on ties.
    pub fn predict_class(&self, x: &[f64]) -> Result<usize, MlpError> {
        let out = self.output(x)?;
        let mut best = 0;
        for (c, &v) in out.iter().enumerate() {
            if v > out[best] {
                best = c;
            }
        }
        Ok(best)
    }

    /// `0.5 * sum (output - target)^2` for one example.
    pub fn loss(&self, x: &[f64], target: &[f64]) -> Result<f64, MlpError> {
        let out = self.output(x)?;
        Ok(0.5 * out.iter().zip(target).map(|(o, t)| (o - t) * (o - t)).sum::<f64>())
    }

    /// Gradient of [`Mlp::loss`] with respect to every weight and bias.
    pub fn backprop(&self, x: &[f64], target: &[f64]) -> Result<Gradients, MlpError> {
        self.check_input(x)?;
        if target.len() != self.n_outputs() {
            return Err(MlpError::DimensionMismatch {
                expected: self.n_outputs(),
                found: target.len(),
            });
        }
        let acts = self.forward_unchecked(x);
        let mut grads: Vec<Layer> = self.layers.iter().map(|l| Layer::zeros(l.inputs, l.outputs)).collect();

        let out = acts.last().unwrap();
        let mut delta: Vec<f64> = out
            .iter()
            .zip(target)
            .map(|(&o, &t)| (o - t) * o * (1.0 - o))
            .collect();
        for li in (0..self.layers.len()).rev() {
            let layer = &self.layers[li];
            let input = &acts[li];
            let g = &mut grads[li];
            for (r, &dr) in delta.iter().enumerate() {
                for (c, &xc) in input.iter().enumerate() {
                    g.weights[r * layer.inputs + c] = dr * xc;
                }
                g.biases[r] = dr;
            }
            if li > 0 {
                delta = (0..layer.inputs)
                    .map(|c| {
                        let back: f64 = delta
                            .iter()
                            .enumerate()
                            .map(|(r, &dr)| layer.weights[r * layer.inputs + c] * dr)
                            .sum();
                        let h = input[c];
                        back * h * (1.0 - h)
                    })
                    .collect();
            }
        }
        Ok(Gradients(grads))
    }

    /// All weights then biases, layer by layer.
    pub fn params(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
            .collect()
    }

    /// Inverse of [`Mlp::params`]. Panics if the length differs.
    pub fn set_params(&mut self, params: &[f64]) {
        let mut it = params.iter().copied();
        for l in &mut self.layers {
            for v in l.weights.iter_mut().chain(l.biases.iter_mut()) {
                *v = it.next().expect("parameter vector too short");
            }
        }
        assert!(it.next().is_none(), "parameter vector too long");
    }

    fn step(&mut self, grads: &Gradients, eta: f64, decay: f64) {
        let shrink = 1.0 - decay;
        for (l, g) in self.layers.iter_mut().zip(&grads.0) {
            for (w, gw) in l.weights.iter_mut().zip(&g.weights) {
                *w = (*w - eta * gw) * shrink;
            }
            for (b, gb) in l.biases.iter_mut().zip(&g.biases) {
                *b -= eta * gb;
            }
        }
    }

    /// Sum over the dataset of squared output errors (no factor one half).
    pub fn sum_squared_error(&self, data: &DataSet, config: &MlpConfig) -> f64 {
        data.examples()
            .iter()
            .map(|e| {
                let target = config.encode_targets(e.label.expect("labelled"));
                2.0 * self.loss(&e.features, &target).expect("checked dimensions")
            })
            .sum()
    }

    /// Runs `config.updates` single-example updates, each on an example
    /// drawn uniformly with replacement, recording the training-set error
    /// at update 0 and every `trace_every` updates.
    pub fn train_stochastic(&mut self, train: &DataSet, config: &MlpConfig) -> Result<TrainingTrace, MlpError> {
        config.validate()?;
        if train.is_empty() {
            return Err(MlpError::EmptyTrain);
        }
        if !train.classes_known() {
            return Err(MlpError::Unlabeled);
        }
        if train.n_attributes() != self.n_inputs() {
            return Err(MlpError::DimensionMismatch {
                expected: self.n_inputs(),
                found: train.n_attributes(),
            });
        }
        if train.n_classes() != self.n_outputs() || config.layer_sizes.last() != Some(&self.n_outputs()) {
            return Err(MlpError::OutputMismatch {
                classes: train.n_classes(),
                outputs: self.n_outputs(),
            });
        }
        let targets: Vec<Vec<f64>> = (0..train.n_classes()).map(|c| config.encode_targets(c)).collect();
        // Offset the stream so selection differs from initialisation.
        let mut rng = SeededRng::new(config.seed ^ 0x5eed_0f7a_1e00);
        let mut trace = TrainingTrace {
            samples: vec![(0, self.sum_squared_error(train, config))],
        };
        for update in 1..=config.updates {
            let i = rng.below(train.len());
            let ex = &train.examples()[i];
            let grads = self.backprop(&ex.features, &targets[train.label(i)])?;
            self.step(&grads, config.eta, config.weight_decay);
            if update % config.trace_every == 0 {
                trace.samples.push((update, self.sum_squared_error(train, config)));
            }
        }
        Ok(trace)
    }

    /// Dataset whose features are the activations of hidden layer
    /// `hidden_index` (0 is the first hidden layer). Labels are kept and
    /// attributes renamed `H0..H{m-1}`.
    pub fn augment(&self, data: &DataSet, hidden_index: usize) -> Result<DataSet, MlpError> {
        if hidden_index >= self.n_hidden() {
            return Err(MlpError::InvalidLayer {
                index: hidden_index,
                hidden: self.n_hidden(),
            });
        }
        if data.n_attributes() != self.n_inputs() {
            return Err(MlpError::DimensionMismatch {
                expected: self.n_inputs(),
                found: data.n_attributes(),
            });
        }
        let width = self.layers[hidden_index].outputs;
        let features = data
            .examples()
            .iter()
            .map(|e| self.forward_unchecked(&e.features).swap_remove(hidden_index + 1))
            .collect();
        let names = (0..width).map(|i| format!("H{i}")).collect();
        data.with_features(format!("{}-h{hidden_index}", data.name), names, features)
            .map_err(|e| MlpError::InvalidConfig(e.to_string()))
    }
}
