use thiserror::Error;

use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({}, {}) lies outside the chart", .0.x, .0.t)]
    OutsideChart(Point),
    #[error("operation requires a model with phi == 1")]
    NonFlatBase,
    #[error("geodesic integration failed: {0}")]
    Integration(String),
    #[error("no f-geodesic connection found: {0}")]
    NoConnection(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("meshing failed: {0}")]
    Mesh(String),
    #[error("solver failed after {iterations} Newton iterations (residual {residual:e}): {reason}")]
    Solver {
        reason: String,
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
