use std::fmt::Write as _;

use super::table::{content_lines, parse_rows, split_header};
use super::{DataError, DataSet};

const NUMBER_OF_EXAMPLES: &str = "[NUMBER_OF_EXAMPLES]";
const NUMBER_OF_ATTRIBUTES: &str = "[NUMBER_OF_ATTRIBUTES]";
const NUMBER_OF_CLASSES: &str = "[NUMBER_OF_CLASSES]";
const PRESENCE_OF_CLASSES: &str = "[PRESENCE_OF_CLASSES]";
const CLASS_NAMES: &str = "[CLASS_NAMES]";
const IMAGE_FILE: &str = "[IMAGE_FILE]";
const PRESENCE_OF_ATTRIBUTE_NAMES: &str = "[PRESENCE_OF_ATTRIBUTE_NAMES]";

const TAGS: [&str; 7] = [
    NUMBER_OF_EXAMPLES,
    NUMBER_OF_ATTRIBUTES,
    NUMBER_OF_CLASSES,
    PRESENCE_OF_CLASSES,
    CLASS_NAMES,
    IMAGE_FILE,
    PRESENCE_OF_ATTRIBUTE_NAMES,
];

/// Reads a tagged `.data` file.
///
/// The header values are cross-checked against the body: the declared
/// example count must equal the rows read and each row must carry the
/// declared number of attributes (plus the label when classes are present).
pub fn read_data_file(bytes: &[u8]) -> Result<DataSet, DataError> {
    let text = std::str::from_utf8(bytes).map_err(|_| DataError::Encoding)?;
    let lines = content_lines(text);
    let mut cursor = 0usize;
    let mut values: Vec<(usize, &str)> = Vec::with_capacity(TAGS.len());

    for (pos, &expected) in TAGS.iter().enumerate() {
        let line_no = cursor + 1;
        let found = *lines.get(cursor).unwrap_or(&"");
        if found != expected {
            return Err(match TAGS.iter().position(|t| *t == found) {
                Some(i) if i < pos => DataError::DuplicateTag {
                    line: line_no,
                    tag: TAGS[i],
                },
                Some(i) => DataError::MisorderedTag {
                    line: line_no,
                    expected,
                    found: TAGS[i],
                },
                None => DataError::MissingTag {
                    line: line_no,
                    expected,
                    found: found.to_string(),
                },
            });
        }
        let value = *lines.get(cursor + 1).unwrap_or(&"");
        values.push((cursor + 2, value));
        cursor += 2;
    }

    let count = parse_count(values[0], NUMBER_OF_EXAMPLES)?;
    let n = parse_count(values[1], NUMBER_OF_ATTRIBUTES)?;
    let c = parse_count(values[2], NUMBER_OF_CLASSES)?;
    let classes_known = parse_bool(values[3], PRESENCE_OF_CLASSES)?;
    let class_names: Vec<String> = values[4].1.split_whitespace().map(str::to_string).collect();
    if class_names.len() != c {
        return Err(DataError::ClassNameCount {
            expected: c,
            found: class_names.len(),
        });
    }
    if parse_bool(values[5], IMAGE_FILE)? {
        return Err(DataError::ImageFile);
    }
    let names_present = parse_bool(values[6], PRESENCE_OF_ATTRIBUTE_NAMES)?;

    let (attribute_names, output_name) = if names_present {
        let header = lines.get(cursor).ok_or(DataError::Empty)?;
        cursor += 1;
        split_header(header, '\t', n)?
    } else {
        (None, None)
    };

    let rows: Vec<(usize, &str)> = lines[cursor..]
        .iter()
        .enumerate()
        .map(|(i, l)| (cursor + i + 1, *l))
        .collect();
    if rows.len() != count {
        return Err(DataError::ExampleCountMismatch {
            declared: count,
            found: rows.len(),
        });
    }
    let examples = parse_rows(&rows, '\t', n, classes_known)?;
    DataSet::new("", n, class_names, classes_known, examples)?
        .with_attribute_names(attribute_names, output_name)
}

/// Renders a dataset as a `.data` file: tags in fixed order, LF line ends,
/// TAB-separated fields and shortest round-trip decimals.
pub fn write_data_file(ds: &DataSet) -> Result<Vec<u8>, DataError> {
    for name in ds.class_names() {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(DataError::InvalidClassName(name.clone()));
        }
    }
    let header_names: Option<Vec<&str>> = ds.attribute_names().map(|names| {
        names
            .iter()
            .map(String::as_str)
            .chain(ds.output_name())
            .collect()
    });
    if let Some(names) = &header_names {
        if let Some(bad) = names.iter().find(|s| s.contains(['\t', '\n', '\r'])) {
            return Err(DataError::InvalidAttributeName(bad.to_string()));
        }
    }

    let mut out = String::new();
    let mut tag = |t: &str, v: &dyn std::fmt::Display| {
        let _ = write!(out, "{t}\n{v}\n");
    };
    tag(NUMBER_OF_EXAMPLES, &ds.len());
    tag(NUMBER_OF_ATTRIBUTES, &ds.n_attributes());
    tag(NUMBER_OF_CLASSES, &ds.n_classes());
    tag(PRESENCE_OF_CLASSES, &ds.classes_known());
    tag(CLASS_NAMES, &ds.class_names().join("\t"));
    tag(IMAGE_FILE, &false);
    tag(PRESENCE_OF_ATTRIBUTE_NAMES, &header_names.is_some());
    if let Some(names) = header_names {
        out.push_str(&names.join("\t"));
        out.push('\n');
    }
    for ex in ds.examples() {
        let mut first = true;
        for v in &ex.features {
            if !first {
                out.push('\t');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        if let Some(y) = ex.label {
            let _ = write!(out, "\t{y}");
        }
        out.push('\n');
    }
    Ok(out.into_bytes())
}

fn parse_count((line, value): (usize, &str), tag: &'static str) -> Result<usize, DataError> {
    value.trim().parse().map_err(|_| DataError::InvalidTagValue {
        line,
        tag,
        value: value.to_string(),
    })
}

fn parse_bool((line, value): (usize, &str), tag: &'static str) -> Result<bool, DataError> {
    match value.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(DataError::InvalidTagValue {
            line,
            tag,
            value: value.to_string(),
        }),
    }
}
