//! Subcommand implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use tcmnn_core::data::{
    parse_text_table, random_split, read_data_file, write_data_file, LabeledExample, SplitSpec, TableOptions,
};
use tcmnn_core::eval::{
    leave_one_out, mark_significance, render_reports, separate_test, separate_with_model, Classifier, EvalRun,
    ReportMeta, StatsOptions,
};
use tcmnn_core::mlp::{read_weights, write_weights};
use tcmnn_core::tcm::{deserialize_cache, serialize_cache};
use tcmnn_core::{DataSet, Mlp, MlpConfig, Statistics, StrangenessCache, TcmConfig, TcmModel};

use crate::args::*;
use crate::grid::{evaluate_grid, GridRequest};

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub fn load_data(path: &Path) -> Result<DataSet> {
    let mut ds = read_data_file(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    ds.name = file_name(path);
    Ok(ds)
}

fn save_data(path: &Path, ds: &DataSet) -> Result<()> {
    write(path, write_data_file(ds)?)
}

fn classifier(opts: &EvalOpts) -> Classifier {
    let (k, metric) = (opts.k, opts.metric);
    match opts.classifier {
        ClassifierKind::Tcmnn => Classifier::Tcm(TcmConfig::new(k, metric)),
        ClassifierKind::Knn => Classifier::Knn { k, metric },
        ClassifierKind::Dwknn => Classifier::Dwknn { k, metric },
    }
}

fn check_eval_opts(opts: &EvalOpts) -> Result<()> {
    if !(0.0..=100.0).contains(&opts.significance) {
        bail!("--significance must lie in 0..100, got {}", opts.significance);
    }
    if opts.hist_interval == 0 || 100 % opts.hist_interval != 0 {
        bail!("--hist-interval must divide 100, got {}", opts.hist_interval);
    }
    Ok(())
}

/// Fits a model, reusing the cache file when it matches the training data
/// and configuration and rewriting it otherwise.
fn model_with_cache(train: &DataSet, config: TcmConfig, cache: Option<&Path>) -> Result<TcmModel> {
    let Some(path) = cache else {
        return Ok(TcmModel::fit(train.clone(), config)?);
    };
    if let Ok(bytes) = fs::read(path) {
        match deserialize_cache(&bytes, train, &config) {
            Ok(c) => {
                eprintln!("cache: loaded {}", path.display());
                return Ok(TcmModel::with_cache(train.clone(), config, c)?);
            }
            Err(e) => eprintln!("cache: rebuilding {} ({e})", path.display()),
        }
    }
    let built = StrangenessCache::build(train, &config)?;
    write(path, serialize_cache(&built))?;
    Ok(TcmModel::with_cache(train.clone(), config, built)?)
}

fn summary(run: &EvalRun, stats: Option<&Statistics>) -> String {
    let mut s = String::new();
    let pct = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}%"));
    let _ = writeln!(s, "{} {} on {}: {} examples", run.mode.as_str(), run.classifier.name(), run.test_name.as_deref().unwrap_or(&run.train_name), run.results.len());
    if let Some(st) = stats {
        let _ = writeln!(s, "overall accuracy: {} ({} of {} classified)", pct(st.overall_accuracy), st.correct, st.classified);
        for (c, name) in run.class_names.iter().enumerate() {
            let _ = writeln!(s, "  {name}: {} of {} ({})", st.class_correct[c], st.class_counts[c], pct(st.class_accuracy[c]));
        }
        if st.significance > 0.0 {
            let _ = writeln!(s, "not classified at {}%: {:.2}%", st.significance, st.not_classified);
        }
        if st.avg_confidence.is_some() {
            let _ = writeln!(s, "average confidence: {}, credibility: {}", pct(st.avg_confidence), pct(st.avg_credibility));
        }
        if let (Some(sens), Some(fpr)) = (st.sensitivity, st.false_positive_rate) {
            let _ = writeln!(s, "sensitivity: {sens:.2}%, false-positive rate: {fpr:.2}%");
        }
    }
    s
}

fn finish_run(run: &EvalRun, opts: &EvalOpts, out_dir: &Path, meta: ReportMeta) -> Result<()> {
    let stats = if run.is_labeled() {
        let stats_opts = StatsOptions {
            histogram_interval: opts.hist_interval,
            positive_class: opts.positive_class,
        };
        Some(mark_significance(run, opts.significance, &stats_opts)?)
    } else {
        None
    };
    let reports = render_reports(run, stats.as_ref(), &meta);
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let written = reports.write_to(out_dir)?;
    print!("{}", summary(run, stats.as_ref()));
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn meta(opts: &EvalOpts, train: &Path, test: Option<&Path>) -> ReportMeta {
    ReportMeta {
        train_file: train.display().to_string(),
        test_file: test.map(|p| p.display().to_string()),
        significance: opts.significance,
        echo_attributes: !opts.no_attr_echo,
    }
}

fn evaluate(train: &DataSet, test: &DataSet, opts: &EvalOpts) -> Result<EvalRun> {
    let echo = !opts.no_attr_echo;
    Ok(match classifier(opts) {
        Classifier::Tcm(config) => {
            let model = model_with_cache(train, config, opts.cache.as_deref())?;
            separate_with_model(&model, test, echo)?
        }
        baseline => {
            if opts.cache.is_some() {
                eprintln!("note: --cache only applies to tcmnn");
            }
            separate_test(train, test, &baseline, echo)?
        }
    })
}

pub fn convert(a: &ConvertArgs) -> Result<()> {
    let raw = String::from_utf8(read(&a.input)?).context("input is not UTF-8")?;
    let opts = TableOptions {
        delimiter: a.delimiter.as_char(),
        has_header: !a.no_header,
        classes_known: a.classes_known,
        n_classes: a.classes,
        class_names: a.class_names.clone(),
    };
    let mut ds = parse_text_table(&raw, &opts).with_context(|| format!("in {}", a.input.display()))?;
    ds.name = file_name(&a.output);
    save_data(&a.output, &ds)?;
    println!("wrote {} examples with {} attributes to {}", ds.len(), ds.n_attributes(), a.output.display());
    Ok(())
}

pub fn inspect_text(ds: &DataSet) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dataset: {}", ds.name);
    let _ = writeln!(s, "examples: {}", ds.len());
    let _ = writeln!(s, "attributes: {}", ds.n_attributes());
    if ds.classes_known() {
        let _ = writeln!(s, "classes: {}", ds.n_classes());
        for (name, count) in ds.class_names().iter().zip(ds.class_counts()) {
            let _ = writeln!(s, "  {name}: {count}");
        }
    } else {
        let _ = writeln!(s, "classes: unknown ({} names)", ds.n_classes());
    }
    let names = ds.attribute_names();
    for j in 0..ds.n_attributes() {
        let (lo, hi) = ds
            .examples()
            .iter()
            .map(|e| e.features[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let name = names.map_or_else(|| format!("A{j}"), |n| n[j].clone());
        let _ = writeln!(s, "  {name}: [{lo}, {hi}]");
    }
    s
}

pub fn inspect(a: &InspectArgs) -> Result<()> {
    print!("{}", inspect_text(&load_data(&a.data)?));
    Ok(())
}

pub fn loo(a: &LooArgs) -> Result<()> {
    check_eval_opts(&a.eval)?;
    if a.eval.cache.is_some() {
        eprintln!("note: --cache is not used by leave-one-out");
    }
    let data = load_data(&a.data)?;
    let run = leave_one_out(&data, &classifier(&a.eval), !a.eval.no_attr_echo)?;
    finish_run(&run, &a.eval, &a.eval.out_dir, meta(&a.eval, &a.data, None))
}

pub fn separate(a: &SeparateArgs) -> Result<()> {
    check_eval_opts(&a.eval)?;
    let (train, test, train_path) = match (&a.train, &a.test, &a.data) {
        (Some(tr), Some(te), None) => (load_data(tr)?, load_data(te)?, tr),
        (None, None, Some(d)) => {
            let count = a.test_count.context("--data needs --test-count")?;
            let data = load_data(d)?;
            let (mut train, mut test) = random_split(&data, SplitSpec { test_count: count, seed: a.seed })?;
            train.name = format!("{} (train, seed {})", data.name, a.seed);
            test.name = format!("{} (test, seed {})", data.name, a.seed);
            (train, test, d)
        }
        _ => bail!("give either --train and --test, or --data and --test-count"),
    };
    let mut run = evaluate(&train, &test, &a.eval)?;
    if a.data.is_some() {
        run.mode = tcmnn_core::eval::EvalMode::RandomSplit;
    }
    finish_run(&run, &a.eval, &a.eval.out_dir, meta(&a.eval, train_path, a.test.as_deref()))
}

pub fn split(a: &SplitArgs) -> Result<()> {
    let data = load_data(&a.data)?;
    let (train, test) = random_split(&data, SplitSpec { test_count: a.test_count, seed: a.seed })?;
    save_data(&a.out_train, &train)?;
    save_data(&a.out_test, &test)?;
    println!("train: {} examples -> {}", train.len(), a.out_train.display());
    println!("test: {} examples -> {}", test.len(), a.out_test.display());
    Ok(())
}

/// Reads queries and strips any labels, keeping the training class names.
fn load_queries(a: &PredictArgs, train: &DataSet) -> Result<DataSet> {
    let bytes = read(&a.input)?;
    let text = std::str::from_utf8(&bytes).context("queries are not UTF-8")?;
    let parsed = if text.trim_start().starts_with('[') {
        read_data_file(&bytes)?
    } else {
        let opts = TableOptions {
            delimiter: a.delimiter.as_char(),
            has_header: a.header,
            classes_known: false,
            ..TableOptions::default()
        };
        parse_text_table(text, &opts)?
    };
    let examples = parsed.examples().iter().map(|e| LabeledExample::unlabeled(e.features.clone())).collect();
    let queries = DataSet::new(file_name(&a.input), parsed.n_attributes(), train.class_names().to_vec(), false, examples)?;
    Ok(match parsed.attribute_names() {
        Some(names) => queries.with_attribute_names(Some(names.to_vec()), None)?,
        None => queries,
    })
}

pub fn predict(a: &PredictArgs) -> Result<()> {
    check_eval_opts(&a.eval)?;
    let train = load_data(&a.train)?;
    let queries = load_queries(a, &train)?;
    let run = evaluate(&train, &queries, &a.eval)?;
    let out = a.out.as_deref().unwrap_or(&a.eval.out_dir);
    finish_run(&run, &a.eval, out, meta(&a.eval, &a.train, Some(&a.input)))
}

pub fn mlp_train(a: &MlpTrainArgs) -> Result<()> {
    let data = load_data(&a.data)?;
    let config = MlpConfig {
        eta: a.eta,
        init_range: a.init_range,
        weight_decay: a.weight_decay,
        target_on: a.target_on,
        target_off: a.target_off,
        per_class_target_on: a.class_target.iter().copied().collect(),
        updates: a.updates,
        trace_every: a.trace_every,
        seed: a.seed,
        ..MlpConfig::new(a.layers.clone())
    };
    let mut net = Mlp::init(&config)?;
    let trace = net.train_stochastic(&data, &config)?;
    write(&a.weights, write_weights(&net))?;
    if let Some(path) = &a.trace {
        let mut text = String::from("update\tsse\n");
        for (update, sse) in &trace.samples {
            let _ = writeln!(text, "{update}\t{sse}");
        }
        write(path, text)?;
    }
    let correct = (0..data.len())
        .filter(|&i| net.predict_class(data.features(i)).is_ok_and(|c| c == data.label(i)))
        .count();
    println!("sum of squared errors: {}", net.sum_squared_error(&data, &config));
    println!("training accuracy: {correct} of {} ({:.2}%)", data.len(), correct as f64 / data.len() as f64 * 100.0);
    println!("wrote {}", a.weights.display());
    Ok(())
}

pub fn mlp_augment(a: &MlpAugmentArgs) -> Result<()> {
    let data = load_data(&a.data)?;
    let text = String::from_utf8(read(&a.weights)?).context("weights file is not UTF-8")?;
    let net = read_weights(&text).with_context(|| format!("in {}", a.weights.display()))?;
    let mut aug = net.augment(&data, a.hidden)?;
    aug.name = file_name(&a.output);
    save_data(&a.output, &aug)?;
    println!("wrote {} examples with {} attributes to {}", aug.len(), aug.n_attributes(), a.output.display());
    Ok(())
}

pub fn serve(a: &ServeArgs) -> Result<()> {
    let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
    let addr = std::net::SocketAddr::new(a.host, a.port);
    runtime
        .block_on(crate::server::serve(addr, a.static_dir.clone()))
        .with_context(|| format!("serving on {addr}"))
}

pub fn grid(a: &GridArgs) -> Result<()> {
    let req: GridRequest = serde_json::from_slice(&read(&a.request)?).context("parsing grid request")?;
    let resp = evaluate_grid(&req)?;
    let text = serde_json::to_string(&resp)?;
    match &a.out {
        Some(path) => write(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
