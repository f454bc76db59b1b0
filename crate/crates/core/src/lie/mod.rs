//! Logarithmic equations, connections and holonomy on matrix Lie groups.

mod connection;
mod expm;
mod flat;
mod group;
mod integrate;

use thiserror::Error;

pub use connection::{
    curvature, holonomy, horizontal_lift, BasePath, ConnectionForm, ExpProduct, CURVATURE_STEP, LOOP_TOL,
};
pub use expm::{commutator, expm, inverse, logm, norm1, Mat, THETA13};
pub use flat::{solve_flat_primitive, FlatPrimitive, FLATNESS_TOL};
pub use group::{
    inverse_path, log_derivative, AlgebraPath, GroupPath, MatrixGroupSpec, Side, ALGEBRA_TOL,
    MEMBERSHIP_TOL,
};
pub use integrate::{adjoint_flow, adjoint_residual, solve_logarithmic, ENDPOINT_TOL, MIN_STEPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value at t = {t} is off the Lie algebra (residual {residual:e})")]
    AlgebraViolation { t: f64, residual: f64 },
    #[error("group path has no samples")]
    EmptyPath,
    #[error("sample at t = {t} is off the group (residual {residual:e})")]
    NotInGroup { t: f64, residual: f64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid step count {0}")]
    InvalidSteps(usize),
    #[error("matrix has no real principal logarithm")]
    NoLogarithm,
    #[error("endpoint membership residual {0:e} exceeds 1e-6; use more steps")]
    StepTooCoarse(f64),
    #[error("path is not closed (gap {gap:e})")]
    NotALoop { gap: f64 },
    #[error("pieces do not join (gap {gap:e})")]
    Discontinuous { gap: f64 },
    #[error("connection is not flat (curvature residual {residual:e})")]
    NotFlat { residual: f64 },
    #[error("directions are linearly dependent")]
    LinearlyDependent,
    #[error("connection is not linear in the direction (defect {defect:e})")]
    NonLinearConnection { defect: f64 },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}
