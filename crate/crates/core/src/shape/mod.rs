//! Discretized shape space of closed planar curves.

mod curve;
mod functional;
mod metric;

use thiserror::Error;

pub use curve::{DiscreteCurve, Point, TangentField, MIN_EDGE, MIN_NODES};
pub use functional::{shape_differential, ShapeFunctional, DIFFERENTIAL_STEP};
pub use metric::{
    arc_length, from_spectrum, gradient_solve, h1_gram, linear_path, mode_of_bin,
    pseudo_distance, spectral_hs_gram, spectrum, GramKind, GramOperator, MetricSpec,
};

pub(crate) use curve::orientation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("a curve needs at least 8 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("edge {edge} has length {length:e}")]
    DegenerateCurve { edge: usize, length: f64 },
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("curve has a non-finite coordinate")]
    NonFiniteNode,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("metric matrix is not symmetric at ({0}, {1})")]
    AsymmetricMetric(usize, usize),
    #[error("metric is not positive definite")]
    SingularMetric,
    #[error("objective is not finite")]
    NonFiniteObjective,
    #[error("{0}")]
    InvalidParameter(String),
}
