//! Datasets, the two on-disk formats, splitting and normalisation.
//!
//! A dataset travels in one of two text forms:
//!
//! * a delimited **text table**: an optional header line of attribute names
//!   (optionally followed by the output name), then one example per line
//!   with the integer class as the last field when classes are known;
//! * the tagged **`.data` file**: seven `[TAG]`/value line pairs describing
//!   the dataset, then the same header and rows, TAB-delimited.

mod datafile;
mod dataset;
mod table;
mod transform;

use thiserror::Error;

pub use datafile::{read_data_file, write_data_file};
pub use dataset::{default_class_names, DataSet, LabeledExample};
pub use table::{parse_text_table, TableOptions};
pub use transform::{min_max_normalize, random_split, MinMaxScaler, SplitSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("input contains no examples")]
    Empty,
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: non-numeric attribute at column {column}: {value:?}")]
    NonNumeric {
        line: usize,
        column: usize,
        value: String,
    },
    #[error("example {row}: attribute {column} is not finite")]
    NonFinite { row: usize, column: usize },
    #[error("line {line}: class label {value:?} is not a non-negative integer")]
    InvalidLabel { line: usize, value: String },
    #[error("example {row}: label {label} outside 0..{classes}")]
    LabelOutOfRange {
        row: usize,
        label: usize,
        classes: usize,
    },
    #[error("example {row} has no label but classes are declared known")]
    MissingLabel { row: usize },
    #[error("example {row} carries a label but classes are declared unknown")]
    UnexpectedLabel { row: usize },
    #[error("expected {expected} attribute names, found {found}")]
    AttributeNameCount { expected: usize, found: usize },
    #[error("expected {expected} class names, found {found}")]
    ClassNameCount { expected: usize, found: usize },
    #[error("class name {0:?} is empty or contains whitespace")]
    InvalidClassName(String),
    #[error("name {0:?} contains a tab or line break")]
    InvalidAttributeName(String),
    #[error("line {line}: expected tag {expected}, found {found:?}")]
    MissingTag {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: duplicate tag {tag}")]
    DuplicateTag { line: usize, tag: &'static str },
    #[error("line {line}: tag {found} out of order, expected {expected}")]
    MisorderedTag {
        line: usize,
        expected: &'static str,
        found: &'static str,
    },
    #[error("line {line}: invalid value {value:?} for {tag}")]
    InvalidTagValue {
        line: usize,
        tag: &'static str,
        value: String,
    },
    #[error("image data files are out of scope")]
    ImageFile,
    #[error("declared {declared} examples but read {found}")]
    ExampleCountMismatch { declared: usize, found: usize },
    #[error("input is not valid UTF-8")]
    Encoding,
    #[error("test count {test_count} must be at least 1 and below the dataset size {len}")]
    InvalidSplit { test_count: usize, len: usize },
    #[error("dataset has unknown classes")]
    Unlabeled,
}
