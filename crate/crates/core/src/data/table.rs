use super::dataset::default_class_names;
use super::{DataError, DataSet, LabeledExample};

/// How to read a delimited text table.
#[derive(Debug, Clone)]
pub struct TableOptions {
    pub delimiter: char,
    pub has_header: bool,
    pub classes_known: bool,
    /// Explicit class count; must cover every observed label.
    pub n_classes: Option<usize>,
    /// Explicit class names; fixes the class count when given.
    pub class_names: Option<Vec<String>>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            delimiter: '\t',
            has_header: true,
            classes_known: true,
            n_classes: None,
            class_names: None,
        }
    }
}

/// Parses a delimited text table into a dataset.
///
/// The attribute count is taken from the first data row. A header may name
/// just the attributes or the attributes plus the output column. Without an
/// explicit class count, `C` is one more than the largest label seen.
pub fn parse_text_table(raw: &str, opts: &TableOptions) -> Result<DataSet, DataError> {
    let mut lines = content_lines(raw).into_iter().enumerate().map(|(i, l)| (i + 1, l));
    let header = if opts.has_header {
        Some(lines.next().ok_or(DataError::Empty)?.1)
    } else {
        None
    };
    let rows: Vec<(usize, &str)> = lines.collect();
    let Some(&(_, first)) = rows.first() else {
        return Err(DataError::Empty);
    };
    let width = first.split(opts.delimiter).count();
    let n = if opts.classes_known {
        width.checked_sub(1).filter(|&n| n > 0).ok_or(DataError::Ragged {
            line: rows[0].0,
            expected: 2,
            found: width,
        })?
    } else {
        width
    };
    let examples = parse_rows(&rows, opts.delimiter, n, opts.classes_known)?;

    let max_label = examples.iter().filter_map(|e| e.label).max();
    let class_names = match (&opts.class_names, opts.n_classes) {
        (Some(names), explicit) => {
            if let Some(c) = explicit.filter(|&c| c != names.len()) {
                return Err(DataError::ClassNameCount {
                    expected: c,
                    found: names.len(),
                });
            }
            names.clone()
        }
        (None, Some(c)) => default_class_names(c),
        (None, None) => default_class_names(max_label.map_or(0, |m| m + 1)),
    };

    let (attribute_names, output_name) = match header {
        Some(h) => split_header(h, opts.delimiter, n)?,
        None => (None, None),
    };

    DataSet::new("", n, class_names, opts.classes_known, examples)?
        .with_attribute_names(attribute_names, output_name)
}

/// Lines of `raw` without terminators, CRLF tolerated, trailing blank
/// lines dropped.
pub(super) fn content_lines(raw: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = raw
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    lines
}

pub(super) fn split_header(
    header: &str,
    delimiter: char,
    n: usize,
) -> Result<(Option<Vec<String>>, Option<String>), DataError> {
    let mut names: Vec<String> = header.split(delimiter).map(|s| s.trim().to_string()).collect();
    let output = match names.len() {
        len if len == n => None,
        len if len == n + 1 => names.pop(),
        len => {
            return Err(DataError::AttributeNameCount {
                expected: n,
                found: len,
            })
        }
    };
    Ok((Some(names), output))
}

/// Parses numbered data rows of `n` features plus an optional trailing label.
pub(super) fn parse_rows(
    rows: &[(usize, &str)],
    delimiter: char,
    n: usize,
    classes_known: bool,
) -> Result<Vec<LabeledExample>, DataError> {
    let expected = n + usize::from(classes_known);
    rows.iter()
        .map(|&(line, text)| {
            let fields: Vec<&str> = text.split(delimiter).collect();
            if fields.len() != expected {
                return Err(DataError::Ragged {
                    line,
                    expected,
                    found: fields.len(),
                });
            }
            let features = fields[..n]
                .iter()
                .enumerate()
                .map(|(col, f)| parse_number(f).ok_or_else(|| DataError::NonNumeric {
                    line,
                    column: col + 1,
                    value: f.to_string(),
                }))
                .collect::<Result<Vec<f64>, _>>()?;
            let label = if classes_known {
                let raw = fields[n].trim();
                Some(raw.parse::<usize>().map_err(|_| DataError::InvalidLabel {
                    line,
                    value: raw.to_string(),
                })?)
            } else {
                None
            };
            Ok(LabeledExample {
                features,
                label,
                display_id: None,
            })
        })
        .collect()
}

fn parse_number(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}
