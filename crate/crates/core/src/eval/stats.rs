use serde::{Deserialize, Serialize};

use super::{EvalError, EvalRun, ExampleResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsOptions {
    /// Histogram bin width in percent; must divide 100.
    pub histogram_interval: u32,
    /// Class treated as positive for sensitivity and false-positive rate
    /// (two-class runs only).
    pub positive_class: Option<usize>,
}

impl Default for StatsOptions {
    fn default() -> Self {
        StatsOptions {
            histogram_interval: 10,
            positive_class: None,
        }
    }
}

/// Summary of a labelled run. All rates are percentages; a rate with an
/// empty denominator is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    pub total: usize,
    pub classified: usize,
    pub correct: usize,
    pub significance: f64,
    pub overall_accuracy: Option<f64>,
    /// Classified test examples of each true class.
    pub class_counts: Vec<usize>,
    pub class_correct: Vec<usize>,
    pub class_accuracy: Vec<Option<f64>>,
    /// `misclassified[t][p]`: classified examples of true class `t` predicted as `p`.
    pub misclassified: Vec<Vec<usize>>,
    /// Row `t` gives each predicted class's share of class `t`'s errors.
    pub confusion: Vec<Option<Vec<f64>>>,
    pub avg_confidence: Option<f64>,
    pub avg_credibility: Option<f64>,
    pub not_classified: f64,
    pub sensitivity: Option<f64>,
    pub false_positive_rate: Option<f64>,
    pub histogram_interval: u32,
    pub confidence_histogram: Option<Vec<f64>>,
    pub credibility_histogram: Option<Vec<f64>>,
}

fn percent(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64 * 100.0)
}

fn mean_percent(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64 * 100.0)
}

/// Percentage of `values` in each bin `[0, i), [i, 2i), ..., [100 - i, 100]`.
/// An empty input gives all-zero bins.
pub fn histogram(values: &[f64], interval: u32) -> Result<Vec<f64>, EvalError> {
    if interval == 0 || interval > 100 || 100 % interval != 0 {
        return Err(EvalError::InvalidInterval(interval));
    }
    let bins = (100 / interval) as usize;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if !(0.0..=1.0).contains(&v) {
            return Err(EvalError::InvalidHistogramValue(v));
        }
        let bin = ((v * 100.0) / f64::from(interval)).floor() as usize;
        counts[bin.min(bins - 1)] += 1;
    }
    Ok(counts
        .into_iter()
        .map(|c| percent(c, values.len()).unwrap_or(0.0))
        .collect())
}

/// Statistics of the whole run, nothing excluded.
pub fn compute_statistics(run: &EvalRun, opts: &StatsOptions) -> Result<Statistics, EvalError> {
    mark_significance(run, 0.0, opts)
}

/// Statistics with every example whose credibility is below `r` percent
/// set aside as not classified. Results without a credibility (baseline
/// learners) are never set aside. Averages and histograms of confidence
/// and credibility cover all examples.
pub fn mark_significance(run: &EvalRun, r: f64, opts: &StatsOptions) -> Result<Statistics, EvalError> {
    if !(0.0..=100.0).contains(&r) {
        return Err(EvalError::InvalidThreshold(r));
    }
    if !run.is_labeled() {
        return Err(EvalError::Unlabeled);
    }
    let c = run.n_classes();
    if let Some(pos) = opts.positive_class {
        if pos >= c {
            return Err(EvalError::InvalidPositiveClass { class: pos, classes: c });
        }
    }
    let excluded = |res: &ExampleResult| res.credibility.is_some_and(|cr| cr * 100.0 < r);

    let mut class_counts = vec![0; c];
    let mut class_correct = vec![0; c];
    let mut misclassified = vec![vec![0; c]; c];
    let mut skipped = 0;
    for res in &run.results {
        if excluded(res) {
            skipped += 1;
            continue;
        }
        let t = res.true_label.expect("checked labelled");
        class_counts[t] += 1;
        if res.predicted == t {
            class_correct[t] += 1;
        } else {
            misclassified[t][res.predicted] += 1;
        }
    }
    let total = run.results.len();
    let classified = total - skipped;
    let correct: usize = class_correct.iter().sum();
    let class_accuracy: Vec<Option<f64>> = (0..c).map(|t| percent(class_correct[t], class_counts[t])).collect();
    let confusion = misclassified
        .iter()
        .map(|row| {
            let errors: usize = row.iter().sum();
            (errors > 0).then(|| row.iter().map(|&n| n as f64 / errors as f64 * 100.0).collect())
        })
        .collect();

    let (sensitivity, false_positive_rate) = match opts.positive_class {
        Some(pos) if c == 2 => (class_accuracy[pos], class_accuracy[1 - pos].map(|a| 100.0 - a)),
        _ => (None, None),
    };

    let confidences: Vec<f64> = run.results.iter().filter_map(|r| r.confidence).collect();
    let credibilities: Vec<f64> = run.results.iter().filter_map(|r| r.credibility).collect();
    let hist = |values: &[f64]| -> Result<Option<Vec<f64>>, EvalError> {
        if values.is_empty() {
            // Still reject a bad interval.
            histogram(values, opts.histogram_interval)?;
            Ok(None)
        } else {
            histogram(values, opts.histogram_interval).map(Some)
        }
    };

    Ok(Statistics {
        total,
        classified,
        correct,
        significance: r,
        overall_accuracy: percent(correct, classified),
        class_counts,
        class_correct,
        class_accuracy,
        misclassified,
        confusion,
        avg_confidence: mean_percent(&confidences),
        avg_credibility: mean_percent(&credibilities),
        not_classified: percent(skipped, total).unwrap_or(0.0),
        sensitivity,
        false_positive_rate,
        histogram_interval: opts.histogram_interval,
        confidence_histogram: hist(&confidences)?,
        credibility_histogram: hist(&credibilities)?,
    })
}
