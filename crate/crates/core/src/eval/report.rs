//! HTML result and statistics documents, and the line-per-example machine
//! report (JSON Lines: one header object, then one object per example).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{EvalError, EvalRun, ExampleResult, Statistics};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportMeta {
    pub train_file: String,
    pub test_file: Option<String>,
    pub significance: f64,
    /// Echo attribute values in the results document.
    pub echo_attributes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub mode: String,
    pub classifier: String,
    pub k: usize,
    pub metric: String,
    pub train: String,
    pub test: Option<String>,
    pub significance: f64,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineRecord {
    pub index: usize,
    pub true_label: Option<usize>,
    pub predicted_label: usize,
    pub confidence: Option<f64>,
    pub credibility: Option<f64>,
    pub p_values: Option<Vec<f64>>,
}

impl From<&ExampleResult> for MachineRecord {
    fn from(r: &ExampleResult) -> Self {
        MachineRecord {
            index: r.index,
            true_label: r.true_label,
            predicted_label: r.predicted,
            confidence: r.confidence,
            credibility: r.credibility,
            p_values: r.p_values.as_ref().map(|p| p.0.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reports {
    pub results_html: String,
    pub statistics_html: Option<String>,
    pub machine_report: String,
}

impl Reports {
    pub const RESULTS_FILE: &'static str = "results.html";
    pub const STATISTICS_FILE: &'static str = "statistics.html";
    pub const MACHINE_FILE: &'static str = "report.jsonl";

    /// Writes the documents into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, EvalError> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, body: &str| -> Result<(), EvalError> {
            let path = dir.join(name);
            std::fs::write(&path, body)?;
            written.push(path);
            Ok(())
        };
        put(Self::RESULTS_FILE, &self.results_html)?;
        if let Some(stats) = &self.statistics_html {
            put(Self::STATISTICS_FILE, stats)?;
        }
        put(Self::MACHINE_FILE, &self.machine_report)?;
        Ok(written)
    }
}

fn header_of(run: &EvalRun, meta: &ReportMeta) -> ReportHeader {
    ReportHeader {
        mode: run.mode.as_str().to_string(),
        classifier: run.classifier.name().to_string(),
        k: run.classifier.k(),
        metric: run.classifier.spec().to_string(),
        train: meta.train_file.clone(),
        test: meta.test_file.clone(),
        significance: meta.significance,
        classes: run.class_names.clone(),
    }
}

/// Results document, statistics document (when `stats` is given) and
/// machine report for a finished run.
pub fn render_reports(run: &EvalRun, stats: Option<&Statistics>, meta: &ReportMeta) -> Reports {
    let header = header_of(run, meta);
    Reports {
        results_html: results_html(run, &header, meta.echo_attributes),
        statistics_html: stats.map(|s| statistics_html(run, s, &header)),
        machine_report: machine_report(run, &header),
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

const STYLE: &str = "body{font-family:sans-serif;margin:1.5em}\
table{border-collapse:collapse;margin:0.5em 0}\
td,th{border:1px solid #999;padding:2px 6px;text-align:left}\
.bar{background:#47a;height:0.8em}\
.wrong{color:#b00}\
.result{margin-bottom:1.2em}";

fn open_document(out: &mut String, title: &str, header: &ReportHeader) {
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<h1>{}</h1>\n",
        escape(title),
        escape(title)
    );
    out.push_str("<table class=\"header\">\n");
    let mut row = |k: &str, v: &str| {
        let _ = writeln!(out, "<tr><th>{}</th><td>{}</td></tr>", escape(k), escape(v));
    };
    row("Test mode", &header.mode);
    row("Classifier", &header.classifier);
    row("Nearest neighbours", &header.k.to_string());
    row("Distance", &header.metric);
    row("Training data", &header.train);
    if let Some(test) = &header.test {
        row("Test data", test);
    }
    row("Significance level (%)", &header.significance.to_string());
    out.push_str("</table>\n");
}

fn close_document(out: &mut String) {
    out.push_str("</body>\n</html>\n");
}

fn class_name(header: &ReportHeader, c: usize) -> String {
    header.classes.get(c).cloned().unwrap_or_else(|| c.to_string())
}

fn fmt_opt(v: Option<f64>, scale: f64) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{:.1}", x * scale))
}

fn results_html(run: &EvalRun, header: &ReportHeader, echo: bool) -> String {
    let mut out = String::new();
    open_document(&mut out, "Classification results", header);
    for r in &run.results {
        let wrong = r.is_correct() == Some(false);
        let _ = writeln!(
            out,
            "<div class=\"result{}\">\n<h3>Example {}</h3>\n<table>",
            if wrong { " wrong" } else { "" },
            r.index
        );
        if let Some(t) = r.true_label {
            let _ = writeln!(out, "<tr><th>Actual class</th><td>{}</td></tr>", escape(&class_name(header, t)));
        }
        let _ = writeln!(
            out,
            "<tr><th>Predicted class</th><td>{}</td></tr>",
            escape(&class_name(header, r.predicted))
        );
        if let Some(ok) = r.is_correct() {
            let _ = writeln!(out, "<tr><th>Correct</th><td>{}</td></tr>", if ok { "yes" } else { "no" });
        }
        let _ = writeln!(out, "<tr><th>Confidence (%)</th><td>{}</td></tr>", fmt_opt(r.confidence, 100.0));
        let _ = writeln!(out, "<tr><th>Credibility (%)</th><td>{}</td></tr>", fmt_opt(r.credibility, 100.0));
        out.push_str("</table>\n");
        if let Some(p) = &r.p_values {
            out.push_str("<table class=\"pvalues\">\n<tr><th>Class</th><th>p-value</th><th></th></tr>\n");
            for (c, &v) in p.0.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "<tr><td>{}</td><td>{v:.4}</td><td style=\"width:200px\"><div class=\"bar\" style=\"width:{:.1}%\"></div></td></tr>",
                    escape(&class_name(header, c)),
                    v * 100.0
                );
            }
            out.push_str("</table>\n");
        }
        if echo {
            if let Some(features) = &r.features {
                out.push_str("<table class=\"attributes\">\n<tr>");
                for (i, _) in features.iter().enumerate() {
                    let name = run
                        .attribute_names
                        .as_ref()
                        .and_then(|n| n.get(i).cloned())
                        .unwrap_or_else(|| format!("A{i}"));
                    let _ = write!(out, "<th>{}</th>", escape(&name));
                }
                out.push_str("</tr>\n<tr>");
                for v in features {
                    let _ = write!(out, "<td>{v}</td>");
                }
                out.push_str("</tr>\n</table>\n");
            }
        }
        out.push_str("</div>\n");
    }
    close_document(&mut out);
    out
}

fn histogram_table(out: &mut String, title: &str, bins: &[f64], interval: u32) {
    let _ = writeln!(out, "<h3>{}</h3>\n<table class=\"histogram\">", escape(title));
    for (i, &v) in bins.iter().enumerate() {
        let lo = i as u32 * interval;
        let hi = lo + interval;
        let close = if i + 1 == bins.len() { ']' } else { ')' };
        let _ = writeln!(
            out,
            "<tr><td>[{lo}, {hi}{close}</td><td>{v:.1}%</td><td style=\"width:200px\"><div class=\"bar\" style=\"width:{v:.1}%\"></div></td></tr>"
        );
    }
    out.push_str("</table>\n");
}

fn statistics_html(run: &EvalRun, s: &Statistics, header: &ReportHeader) -> String {
    let mut out = String::new();
    open_document(&mut out, "Statistics", header);
    out.push_str("<h2>Overall</h2>\n<table>\n");
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "<tr><th>{k}</th><td>{v}</td></tr>");
    };
    row("Examples tested", s.total.to_string());
    row("Examples classified", s.classified.to_string());
    row("Correctly classified", s.correct.to_string());
    row("Overall accuracy (%)", fmt_opt(s.overall_accuracy, 1.0));
    row("Not classified (%)", format!("{:.1}", s.not_classified));
    row("Average confidence (%)", fmt_opt(s.avg_confidence, 1.0));
    row("Average credibility (%)", fmt_opt(s.avg_credibility, 1.0));
    if s.sensitivity.is_some() || s.false_positive_rate.is_some() {
        row("Sensitivity (%)", fmt_opt(s.sensitivity, 1.0));
        row("False positive rate (%)", fmt_opt(s.false_positive_rate, 1.0));
    }
    out.push_str("</table>\n");

    for t in 0..run.n_classes() {
        let name = escape(&class_name(header, t));
        let _ = writeln!(out, "<h2>Class {t} ({name})</h2>");
        let _ = writeln!(
            out,
            "<p>{} of {} classified examples correct. Accuracy: {}%</p>",
            s.class_correct[t],
            s.class_counts[t],
            fmt_opt(s.class_accuracy[t], 1.0)
        );
        if let Some(row) = &s.confusion[t] {
            let errors: usize = s.misclassified[t].iter().sum();
            let _ = writeln!(out, "<p>Of the {errors} examples incorrectly classified:</p>\n<ul>");
            for (p, share) in row.iter().enumerate().filter(|&(p, _)| p != t && s.misclassified[t][p] > 0) {
                let _ = writeln!(
                    out,
                    "<li>{share:.1}% misclassified as class {p} ({})</li>",
                    escape(&class_name(header, p))
                );
            }
            out.push_str("</ul>\n");
        }
    }

    if let Some(h) = &s.confidence_histogram {
        histogram_table(&mut out, "Confidence distribution", h, s.histogram_interval);
    }
    if let Some(h) = &s.credibility_histogram {
        histogram_table(&mut out, "Credibility distribution", h, s.histogram_interval);
    }
    close_document(&mut out);
    out
}

fn machine_report(run: &EvalRun, header: &ReportHeader) -> String {
    let mut out = String::new();
    let head = serde_json::to_string(header).expect("header serializes");
    out.push_str(&head);
    out.push('\n');
    for r in &run.results {
        let mut obj = Map::new();
        obj.insert("index".into(), json!(r.index));
        obj.insert("true_label".into(), json!(r.true_label));
        obj.insert("predicted_label".into(), json!(r.predicted));
        obj.insert("confidence".into(), json!(r.confidence));
        obj.insert("credibility".into(), json!(r.credibility));
        if let Some(p) = &r.p_values {
            for (c, v) in p.0.iter().enumerate() {
                obj.insert(format!("p_{c}"), json!(v));
            }
        }
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
    }
    out
}

pub fn parse_machine_report(text: &str) -> Result<(ReportHeader, Vec<MachineRecord>), EvalError> {
    let bad = |line: usize, reason: String| EvalError::MalformedReport { line, reason };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| bad(1, "empty report".into()))?;
    let header: ReportHeader = serde_json::from_str(first).map_err(|e| bad(1, e.to_string()))?;
    let mut records = Vec::new();
    for (i, line) in lines {
        let no = i + 1;
        let obj: Map<String, Value> = serde_json::from_str(line).map_err(|e| bad(no, e.to_string()))?;
        let field = |name: &str| obj.get(name).ok_or_else(|| bad(no, format!("missing {name}")));
        let index = field("index")?.as_u64().ok_or_else(|| bad(no, "bad index".into()))? as usize;
        let true_label = match field("true_label")? {
            Value::Null => None,
            v => Some(v.as_u64().ok_or_else(|| bad(no, "bad true_label".into()))? as usize),
        };
        let predicted_label = field("predicted_label")?
            .as_u64()
            .ok_or_else(|| bad(no, "bad predicted_label".into()))? as usize;
        let real = |name: &str| -> Result<Option<f64>, EvalError> {
            match field(name)? {
                Value::Null => Ok(None),
                v => v.as_f64().map(Some).ok_or_else(|| bad(no, format!("bad {name}"))),
            }
        };
        let confidence = real("confidence")?;
        let credibility = real("credibility")?;
        let p_values = if obj.contains_key("p_0") {
            let p = (0..header.classes.len())
                .map(|c| {
                    obj.get(&format!("p_{c}"))
                        .and_then(Value::as_f64)
                        .ok_or_else(|| bad(no, format!("missing p_{c}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            Some(p)
        } else {
            None
        };
        records.push(MachineRecord {
            index,
            true_label,
            predicted_label,
            confidence,
            credibility,
            p_values,
        });
    }
    Ok((header, records))
}
