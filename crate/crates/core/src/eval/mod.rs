//! Test harness: leave-one-out, separate train/test and random-split runs,
//! followed by statistics, significance marking and report rendering.

mod report;
mod rmi;
mod stats;
mod ttest;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{random_split, DataError, DataSet, SplitSpec};
use crate::distance::DistanceSpec;
use crate::neighbors::{dwknn_classify, knn_classify, NeighborError};
use crate::tcm::{prediction_from_pvalues, ClassPValues, LeaveOneOutTable, TcmConfig, TcmError, TcmModel};

pub use report::{parse_machine_report, render_reports, MachineRecord, ReportHeader, ReportMeta, Reports};
pub use rmi::{rmi_index, RmiResult};
pub use stats::{compute_statistics, histogram, mark_significance, StatsOptions, Statistics};
pub use ttest::{paired_t_from_sums, paired_t_statistic, TTestResult};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Tcm(#[from] TcmError),
    #[error(transparent)]
    Neighbor(#[from] NeighborError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("training data has {train} attributes, test data has {test}")]
    DimensionMismatch { train: usize, test: usize },
    #[error("training data has {train} classes, test data has {test}")]
    ClassMismatch { train: usize, test: usize },
    #[error("run has no true labels")]
    Unlabeled,
    #[error("histogram interval must divide 100, got {0}")]
    InvalidInterval(u32),
    #[error("histogram value {0} lies outside [0, 1]")]
    InvalidHistogramValue(f64),
    #[error("significance threshold must lie in [0, 100], got {0}")]
    InvalidThreshold(f64),
    #[error("positive class {class} is out of range for {classes} classes")]
    InvalidPositiveClass { class: usize, classes: usize },
    #[error("t statistic needs at least 2 differences, got {0}")]
    TooFewDifferences(usize),
    #[error("t statistic undefined: all differences are equal")]
    ZeroDenominator,
    #[error("risk index inputs must be finite and non-negative")]
    NegativeRmiInput,
    #[error("malformed machine report at line {line}: {reason}")]
    MalformedReport { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which learner produced a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classifier {
    Tcm(TcmConfig),
    Knn { k: usize, metric: DistanceSpec },
    Dwknn { k: usize, metric: DistanceSpec },
}

impl Classifier {
    pub fn k(&self) -> usize {
        match self {
            Classifier::Tcm(c) => c.k,
            Classifier::Knn { k, .. } | Classifier::Dwknn { k, .. } => *k,
        }
    }

    pub fn spec(&self) -> DistanceSpec {
        match self {
            Classifier::Tcm(c) => c.spec,
            Classifier::Knn { metric, .. } | Classifier::Dwknn { metric, .. } => *metric,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classifier::Tcm(_) => "tcmnn",
            Classifier::Knn { .. } => "knn",
            Classifier::Dwknn { .. } => "dwknn",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    LeaveOneOut,
    Separate,
    RandomSplit,
    Predict,
}

impl EvalMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalMode::LeaveOneOut => "leave-one-out",
            EvalMode::Separate => "separate",
            EvalMode::RandomSplit => "random-split",
            EvalMode::Predict => "predict",
        }
    }
}

/// Outcome for one test example. Baseline learners leave the
/// confidence, credibility and p-value fields empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleResult {
    pub index: usize,
    pub true_label: Option<usize>,
    pub predicted: usize,
    pub confidence: Option<f64>,
    pub credibility: Option<f64>,
    pub p_values: Option<ClassPValues>,
    pub features: Option<Vec<f64>>,
}

impl ExampleResult {
    pub fn is_correct(&self) -> Option<bool> {
        self.true_label.map(|t| t == self.predicted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRun {
    pub mode: EvalMode,
    pub classifier: Classifier,
    pub class_names: Vec<String>,
    pub attribute_names: Option<Vec<String>>,
    pub train_name: String,
    pub test_name: Option<String>,
    pub results: Vec<ExampleResult>,
}

impl EvalRun {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn is_labeled(&self) -> bool {
        self.results.iter().all(|r| r.true_label.is_some())
    }
}

fn tcm_result(model: &TcmModel, index: usize, x: &[f64], label: Option<usize>, echo: bool) -> Result<ExampleResult, TcmError> {
    let (pred, p) = model.classify(x)?;
    Ok(ExampleResult {
        index,
        true_label: label,
        predicted: pred.label,
        confidence: Some(pred.confidence),
        credibility: Some(pred.credibility),
        p_values: Some(p),
        features: echo.then(|| x.to_vec()),
    })
}

fn baseline_result(
    classifier: &Classifier,
    train: &DataSet,
    index: usize,
    x: &[f64],
    label: Option<usize>,
    echo: bool,
) -> Result<ExampleResult, NeighborError> {
    let predicted = match *classifier {
        Classifier::Knn { k, metric } => knn_classify(train, x, k, &metric)?,
        Classifier::Dwknn { k, metric } => dwknn_classify(train, x, k, &metric)?,
        Classifier::Tcm(_) => unreachable!("handled by tcm_result"),
    };
    Ok(ExampleResult {
        index,
        true_label: label,
        predicted,
        confidence: None,
        credibility: None,
        p_values: None,
        features: echo.then(|| x.to_vec()),
    })
}

/// Classifies every example against a model trained on all the others.
pub fn leave_one_out(data: &DataSet, classifier: &Classifier, echo: bool) -> Result<EvalRun, EvalError> {
    if !data.classes_known() {
        return Err(EvalError::Unlabeled);
    }
    let results = match classifier {
        Classifier::Tcm(config) => {
            let table = LeaveOneOutTable::build(data, config)?;
            (0..data.len())
                .into_par_iter()
                .map(|i| {
                    let model = table.fold(data, i);
                    tcm_result(&model, i, data.features(i), Some(data.label(i)), echo)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        baseline => (0..data.len())
            .into_par_iter()
            .map(|i| baseline_result(baseline, &data.without(i), i, data.features(i), Some(data.label(i)), echo))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(EvalRun {
        mode: EvalMode::LeaveOneOut,
        classifier: *classifier,
        class_names: data.class_names().to_vec(),
        attribute_names: data.attribute_names().map(<[String]>::to_vec),
        train_name: data.name.clone(),
        test_name: None,
        results,
    })
}

fn check_compatible(train: &DataSet, test: &DataSet) -> Result<(), EvalError> {
    if !train.classes_known() {
        return Err(EvalError::Unlabeled);
    }
    // An empty test set has no width of its own.
    if !test.is_empty() && test.n_attributes() != train.n_attributes() {
        return Err(EvalError::DimensionMismatch {
            train: train.n_attributes(),
            test: test.n_attributes(),
        });
    }
    if test.classes_known() && test.n_classes() != train.n_classes() {
        return Err(EvalError::ClassMismatch {
            train: train.n_classes(),
            test: test.n_classes(),
        });
    }
    Ok(())
}

fn run_from(mode: EvalMode, classifier: Classifier, train: &DataSet, test: &DataSet, results: Vec<ExampleResult>) -> EvalRun {
    EvalRun {
        mode,
        classifier,
        class_names: train.class_names().to_vec(),
        attribute_names: train.attribute_names().map(<[String]>::to_vec),
        train_name: train.name.clone(),
        test_name: Some(test.name.clone()),
        results,
    }
}

fn mode_for(test: &DataSet) -> EvalMode {
    if test.classes_known() {
        EvalMode::Separate
    } else {
        EvalMode::Predict
    }
}

/// Classifies each test example against the whole training set. An
/// unlabelled test set yields a prediction-only run.
pub fn separate_test(train: &DataSet, test: &DataSet, classifier: &Classifier, echo: bool) -> Result<EvalRun, EvalError> {
    check_compatible(train, test)?;
    match classifier {
        Classifier::Tcm(config) => {
            let model = TcmModel::fit(train.clone(), *config)?;
            separate_with_model(&model, test, echo)
        }
        baseline => {
            let results = test
                .examples()
                .par_iter()
                .enumerate()
                .map(|(i, e)| baseline_result(baseline, train, i, &e.features, e.label, echo))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(run_from(mode_for(test), *classifier, train, test, results))
        }
    }
}

/// As [`separate_test`] with a model whose cache is already built.
pub fn separate_with_model(model: &TcmModel, test: &DataSet, echo: bool) -> Result<EvalRun, EvalError> {
    let train = model.train();
    check_compatible(train, test)?;
    let results = test
        .examples()
        .par_iter()
        .enumerate()
        .map(|(i, e)| tcm_result(model, i, &e.features, e.label, echo))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(run_from(mode_for(test), Classifier::Tcm(*model.config()), train, test, results))
}

/// Random split followed by a separate-set test.
pub fn random_split_test(data: &DataSet, split: SplitSpec, classifier: &Classifier, echo: bool) -> Result<EvalRun, EvalError> {
    let (train, test) = random_split(data, split)?;
    let mut run = separate_test(&train, &test, classifier, echo)?;
    run.mode = EvalMode::RandomSplit;
    Ok(run)
}

/// Rebuilds the p-value derived fields, e.g. after editing p-values.
pub fn result_from_pvalues(index: usize, true_label: Option<usize>, p: ClassPValues) -> ExampleResult {
    let pred = prediction_from_pvalues(&p);
    ExampleResult {
        index,
        true_label,
        predicted: pred.label,
        confidence: Some(pred.confidence),
        credibility: Some(pred.credibility),
        p_values: Some(p),
        features: None,
    }
}
