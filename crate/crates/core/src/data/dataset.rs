use serde::{Deserialize, Serialize};

use super::DataError;

/// One example: a feature vector and, when known, its class index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub features: Vec<f64>,
    pub label: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_id: Option<String>,
}

impl LabeledExample {
    pub fn new(features: Vec<f64>, label: usize) -> Self {
        LabeledExample {
            features,
            label: Some(label),
            display_id: None,
        }
    }

    pub fn unlabeled(features: Vec<f64>) -> Self {
        LabeledExample {
            features,
            label: None,
            display_id: None,
        }
    }
}

/// A collection of examples sharing one attribute schema.
///
/// Construct through [`DataSet::new`] (or the readers), which enforces the
/// invariants: every example has `n_attributes` finite features, every
/// label lies in `0..n_classes`, labels are present exactly when
/// `classes_known`, and `class_names` has `n_classes` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSet {
    pub name: String,
    n_attributes: usize,
    class_names: Vec<String>,
    classes_known: bool,
    attribute_names: Option<Vec<String>>,
    output_name: Option<String>,
    examples: Vec<LabeledExample>,
}

impl DataSet {
    pub fn new(
        name: impl Into<String>,
        n_attributes: usize,
        class_names: Vec<String>,
        classes_known: bool,
        examples: Vec<LabeledExample>,
    ) -> Result<Self, DataError> {
        let ds = DataSet {
            name: name.into(),
            n_attributes,
            class_names,
            classes_known,
            attribute_names: None,
            output_name: None,
            examples,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Labeled dataset with generated class names `Class0..Class{C-1}`.
    pub fn labeled(
        name: impl Into<String>,
        n_classes: usize,
        examples: Vec<(Vec<f64>, usize)>,
    ) -> Result<Self, DataError> {
        let n = examples.first().map_or(0, |(x, _)| x.len());
        let examples = examples
            .into_iter()
            .map(|(x, y)| LabeledExample::new(x, y))
            .collect();
        DataSet::new(name, n, default_class_names(n_classes), true, examples)
    }

    pub fn with_attribute_names(
        mut self,
        names: Option<Vec<String>>,
        output_name: Option<String>,
    ) -> Result<Self, DataError> {
        self.attribute_names = names.filter(|v| !v.is_empty());
        self.output_name = output_name;
        self.validate()?;
        Ok(self)
    }

    pub(crate) fn validate(&self) -> Result<(), DataError> {
        let c = self.class_names.len();
        for (row, ex) in self.examples.iter().enumerate() {
            if ex.features.len() != self.n_attributes {
                return Err(DataError::Ragged {
                    line: row + 1,
                    expected: self.n_attributes,
                    found: ex.features.len(),
                });
            }
            if let Some(col) = ex.features.iter().position(|v| !v.is_finite()) {
                return Err(DataError::NonFinite { row, column: col + 1 });
            }
            match (self.classes_known, ex.label) {
                (true, None) => return Err(DataError::MissingLabel { row }),
                (false, Some(_)) => return Err(DataError::UnexpectedLabel { row }),
                (true, Some(y)) if y >= c => {
                    return Err(DataError::LabelOutOfRange { row, label: y, classes: c })
                }
                _ => {}
            }
        }
        if let Some(names) = &self.attribute_names {
            if names.len() != self.n_attributes {
                return Err(DataError::AttributeNameCount {
                    expected: self.n_attributes,
                    found: names.len(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn classes_known(&self) -> bool {
        self.classes_known
    }

    pub fn attribute_names(&self) -> Option<&[String]> {
        self.attribute_names.as_deref()
    }

    pub fn output_name(&self) -> Option<&str> {
        self.output_name.as_deref()
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.examples[i].features
    }

    /// Label of example `i`. Panics on an unlabeled dataset.
    pub fn label(&self, i: usize) -> usize {
        self.examples[i].label.expect("dataset is labeled")
    }

    pub fn labels(&self) -> Option<Vec<usize>> {
        self.examples.iter().map(|e| e.label).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for y in self.examples.iter().filter_map(|e| e.label) {
            counts[y] += 1;
        }
        counts
    }

    /// Copy of the dataset keeping the examples at `indices`, in that order.
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> DataSet {
        DataSet {
            name: name.into(),
            examples: indices.iter().map(|&i| self.examples[i].clone()).collect(),
            ..self.schema_clone()
        }
    }

    /// Copy with example `i` removed.
    pub fn without(&self, i: usize) -> DataSet {
        let mut examples = Vec::with_capacity(self.len().saturating_sub(1));
        examples.extend_from_slice(&self.examples[..i]);
        examples.extend_from_slice(&self.examples[i + 1..]);
        DataSet {
            examples,
            ..self.schema_clone()
        }
    }

    /// Same schema, new examples.
    pub fn with_examples(&self, examples: Vec<LabeledExample>) -> Result<DataSet, DataError> {
        let ds = DataSet {
            examples,
            ..self.schema_clone()
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Replaces the feature schema, keeping labels and class names.
    pub(crate) fn with_features(
        &self,
        name: impl Into<String>,
        attribute_names: Vec<String>,
        features: Vec<Vec<f64>>,
    ) -> Result<DataSet, DataError> {
        let n = attribute_names.len();
        let examples = self
            .examples
            .iter()
            .zip(features)
            .map(|(e, x)| LabeledExample {
                features: x,
                label: e.label,
                display_id: e.display_id.clone(),
            })
            .collect();
        let ds = DataSet {
            name: name.into(),
            n_attributes: n,
            class_names: self.class_names.clone(),
            classes_known: self.classes_known,
            attribute_names: Some(attribute_names),
            output_name: self.output_name.clone(),
            examples,
        };
        ds.validate()?;
        Ok(ds)
    }

    fn schema_clone(&self) -> DataSet {
        DataSet {
            name: self.name.clone(),
            n_attributes: self.n_attributes,
            class_names: self.class_names.clone(),
            classes_known: self.classes_known,
            attribute_names: self.attribute_names.clone(),
            output_name: self.output_name.clone(),
            examples: Vec::new(),
        }
    }

    pub(crate) fn examples_mut(&mut self) -> &mut [LabeledExample] {
        &mut self.examples
    }
}

pub fn default_class_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("Class{i}")).collect()
}
