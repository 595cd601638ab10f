//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tcmnn_core::DistanceSpec;

#[derive(Debug, Parser)]
#[command(name = "tcmnn", version, about = "Transductive confidence machine on nearest neighbours")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a delimited text table to a .data file.
    Convert(ConvertArgs),
    /// Summarise a .data file.
    Inspect(InspectArgs),
    /// Leave-one-out evaluation.
    Loo(LooArgs),
    /// Evaluate against a separate test set, or a random split of one file.
    Separate(SeparateArgs),
    /// Split a .data file into training and test files.
    Split(SplitArgs),
    /// Classify unlabelled queries.
    Predict(PredictArgs),
    /// Train a multi-layer perceptron.
    MlpTrain(MlpTrainArgs),
    /// Replace features with the activations of one hidden layer.
    MlpAugment(MlpAugmentArgs),
    /// Run the HTTP service for the explorer.
    Serve(ServeArgs),
    /// Evaluate a grid request from a file.
    Grid(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifierKind {
    Tcmnn,
    Knn,
    Dwknn,
}

#[derive(Debug, Args)]
pub struct EvalOpts {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// euclidean, minkowski:<p> or poly:<d>:<c>
    #[arg(long, default_value = "euclidean")]
    pub metric: DistanceSpec,
    #[arg(long, value_enum, default_value = "tcmnn")]
    pub classifier: ClassifierKind,
    /// Examples with credibility below this percentage are left unclassified.
    #[arg(long, default_value_t = 0.0)]
    pub significance: f64,
    /// Histogram bin width in percent.
    #[arg(long, default_value_t = 10)]
    pub hist_interval: u32,
    /// Strangeness cache file; loaded when it matches, rebuilt otherwise.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value = "report")]
    pub out_dir: PathBuf,
    /// Leave attribute values out of the results document.
    #[arg(long)]
    pub no_attr_echo: bool,
    /// Class counted as positive for sensitivity (two-class data).
    #[arg(long)]
    pub positive_class: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Delimiter {
    Tab,
    Comma,
    Space,
    Semicolon,
}

impl Delimiter {
    pub fn as_char(self) -> char {
        match self {
            Delimiter::Tab => '\t',
            Delimiter::Comma => ',',
            Delimiter::Space => ' ',
            Delimiter::Semicolon => ';',
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "tab")]
    pub delimiter: Delimiter,
    /// Last column holds integer class labels.
    #[arg(long)]
    pub classes_known: bool,
    #[arg(long, value_delimiter = ',')]
    pub class_names: Option<Vec<String>>,
    /// Number of classes, when not every class occurs in the table.
    #[arg(long)]
    pub classes: Option<usize>,
    /// First line holds data rather than column names.
    #[arg(long)]
    pub no_header: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Debug, Args)]
pub struct LooArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub eval: EvalOpts,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["train", "data"])))]
pub struct SeparateArgs {
    #[arg(long, requires = "test", conflicts_with = "data")]
    pub train: Option<PathBuf>,
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Split this file instead of reading separate train and test files.
    #[arg(long, requires = "test_count", conflicts_with = "test")]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub test_count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub eval: EvalOpts,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub test_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_train: PathBuf,
    #[arg(long)]
    pub out_test: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub train: PathBuf,
    /// Queries: a .data file or a delimited text table without labels.
    #[arg(long)]
    pub input: PathBuf,
    /// The text table's first line names the columns.
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum, default_value = "tab")]
    pub delimiter: Delimiter,
    /// Output directory; overrides --out-dir.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub eval: EvalOpts,
}

#[derive(Debug, Args)]
pub struct MlpTrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Units per layer, input first, e.g. 3,5,2.
    #[arg(long, value_delimiter = ',', required = true)]
    pub layers: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub updates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Initial weights are drawn from [-r, r].
    #[arg(long, default_value_t = 0.05)]
    pub init_range: f64,
    #[arg(long, default_value_t = 0.0)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 0.999)]
    pub target_on: f64,
    #[arg(long, default_value_t = 0.001)]
    pub target_off: f64,
    /// Per-class "on" target as CLASS=VALUE; repeatable.
    #[arg(long, value_parser = parse_class_target)]
    pub class_target: Vec<(usize, f64)>,
    #[arg(long, default_value_t = 20)]
    pub trace_every: usize,
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

fn parse_class_target(s: &str) -> Result<(usize, f64), String> {
    let (c, v) = s.split_once('=').ok_or_else(|| format!("expected CLASS=VALUE, got {s:?}"))?;
    let c = c.trim().parse().map_err(|e| format!("class {c:?}: {e}"))?;
    let v = v.trim().parse().map_err(|e| format!("value {v:?}: {e}"))?;
    Ok((c, v))
}

#[derive(Debug, Args)]
pub struct MlpAugmentArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub weights: PathBuf,
    /// Hidden layer index, 0 for the first.
    #[arg(long, default_value_t = 0)]
    pub hidden: usize,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory of static files served outside /api.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub request: PathBuf,
    /// Write the response here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
