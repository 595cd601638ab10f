//! Transductive confidence machine built on k-nearest-neighbour
//! strangeness, with configurable distances, nearest-neighbour and
//! multilayer-perceptron baselines, and an evaluation harness.
//!
//! ```
//! use tcmnn_core::{DataSet, TcmConfig, TcmModel};
//!
//! let train = DataSet::labeled(
//!     "toy",
//!     2,
//!     vec![(vec![0.0], 0), (vec![1.0], 0), (vec![10.0], 1), (vec![11.0], 1)],
//! )
//! .unwrap();
//! let model = TcmModel::fit(train, TcmConfig::default()).unwrap();
//! let (prediction, p_values) = model.classify(&[0.5]).unwrap();
//! assert_eq!(prediction.label, 0);
//! assert_eq!(p_values.len(), 2);
//! ```

pub mod data;
pub mod distance;
pub mod eval;
pub mod mlp;
pub mod neighbors;
mod rng;
pub mod tcm;

pub use data::{DataError, DataSet, LabeledExample};
pub use distance::{DistanceError, DistanceSpec};
pub use eval::{EvalError, EvalRun, Statistics};
pub use mlp::{Mlp, MlpConfig, MlpError};
pub use neighbors::NeighborError;
pub use rng::SeededRng;
pub use tcm::{ClassPValues, Prediction, StrangenessCache, TcmConfig, TcmError, TcmModel};
