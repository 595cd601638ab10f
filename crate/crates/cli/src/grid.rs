//! Decision-surface evaluation over the unit square, backing the explorer.
//!
//! Feature space is `[0, 1]²` with `y` growing downwards, so row 0 of the
//! response is the top of the canvas. Each cell is classified at its centre
//! `((i + 0.5) / w, (j + 0.5) / h)`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tcmnn_core::tcm::{ClassPValues, Prediction};
use tcmnn_core::{DataSet, DistanceSpec, TcmConfig, TcmError, TcmModel};

pub const MAX_RESOLUTION: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub label: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub k: usize,
    pub metric: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub w: usize,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRequest {
    pub points: Vec<GridPoint>,
    pub config: GridConfig,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub label: usize,
    pub confidence: f64,
    pub credibility: f64,
}

impl From<Prediction> for GridCell {
    fn from(p: Prediction) -> Self {
        GridCell {
            label: p.label,
            confidence: p.confidence,
            credibility: p.credibility,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResponse {
    pub cells: Vec<Vec<GridCell>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictRequest {
    pub points: Vec<GridPoint>,
    pub config: GridConfig,
    pub point: QueryPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictResponse {
    pub label: usize,
    pub confidence: f64,
    pub credibility: f64,
    pub p_values: ClassPValues,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    KTooLarge,
    InvalidK,
    EmptyClass,
    TooFewClasses,
    BadMetric,
    BadResolution,
    BadPoint,
    BadRequest,
    Internal,
}

impl ErrorCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCode::KTooLarge => "k_too_large",
            ErrorCode::InvalidK => "invalid_k",
            ErrorCode::EmptyClass => "empty_class",
            ErrorCode::TooFewClasses => "too_few_classes",
            ErrorCode::BadMetric => "bad_metric",
            ErrorCode::BadResolution => "bad_resolution",
            ErrorCode::BadPoint => "bad_point",
            ErrorCode::BadRequest => "bad_request",
            ErrorCode::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridError {
    pub code: ErrorCode,
    pub message: String,
}

impl GridError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        GridError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}

impl std::error::Error for GridError {}

impl From<TcmError> for GridError {
    fn from(e: TcmError) -> Self {
        let code = match e {
            TcmError::KTooLarge { .. } => ErrorCode::KTooLarge,
            TcmError::InvalidK => ErrorCode::InvalidK,
            TcmError::EmptyClass { .. } => ErrorCode::EmptyClass,
            TcmError::TooFewClasses(_) => ErrorCode::TooFewClasses,
            TcmError::Distance(_) => ErrorCode::BadMetric,
            TcmError::DimensionMismatch { .. } => ErrorCode::BadPoint,
            _ => ErrorCode::Internal,
        };
        GridError::new(code, e.to_string())
    }
}

fn in_unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

/// Validates the points and config and fits a model on them.
fn fit(points: &[GridPoint], config: &GridConfig) -> Result<TcmModel, GridError> {
    let spec: DistanceSpec = config
        .metric
        .parse()
        .map_err(|e| GridError::new(ErrorCode::BadMetric, format!("{e}")))?;
    if let Some((i, _)) = points.iter().enumerate().find(|(_, p)| !in_unit(p.x) || !in_unit(p.y)) {
        return Err(GridError::new(ErrorCode::BadPoint, format!("point {i} lies outside the unit square")));
    }
    let classes = points.iter().map(|p| p.label + 1).max().unwrap_or(0);
    let rows = points.iter().map(|p| (vec![p.x, p.y], p.label)).collect();
    let train = DataSet::labeled("points", classes, rows).map_err(|e| GridError::new(ErrorCode::BadPoint, e.to_string()))?;
    Ok(TcmModel::fit(train, TcmConfig::new(config.k, spec))?)
}

/// Classifies the centre of every cell of a `w × h` grid.
pub fn evaluate_grid(req: &GridRequest) -> Result<GridResponse, GridError> {
    let Resolution { w, h } = req.resolution;
    if w == 0 || h == 0 || w > MAX_RESOLUTION || h > MAX_RESOLUTION {
        return Err(GridError::new(
            ErrorCode::BadResolution,
            format!("resolution {w}x{h} outside 1..={MAX_RESOLUTION}"),
        ));
    }
    let model = fit(&req.points, &req.config)?;
    let cells = (0..h)
        .into_par_iter()
        .map(|j| {
            let y = (j as f64 + 0.5) / h as f64;
            (0..w)
                .map(|i| {
                    let x = (i as f64 + 0.5) / w as f64;
                    model.classify(&[x, y]).map(|(p, _)| GridCell::from(p))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridResponse { cells })
}

pub fn evaluate_point(req: &PredictRequest) -> Result<PredictResponse, GridError> {
    let QueryPoint { x, y } = req.point;
    if !in_unit(x) || !in_unit(y) {
        return Err(GridError::new(ErrorCode::BadPoint, "query lies outside the unit square"));
    }
    let model = fit(&req.points, &req.config)?;
    let (p, p_values) = model.classify(&[x, y])?;
    Ok(PredictResponse {
        label: p.label,
        confidence: p.confidence,
        credibility: p.credibility,
        p_values,
    })
}
