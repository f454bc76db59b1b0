//! Retraction-based steepest descent with Armijo backtracking.
//!
//! Each iteration assembles the metric at the current curve, represents the
//! differential of the objective as a gradient through that metric, and
//! backtracks along the retracted negative gradient until the Armijo
//! decrease `J(R(-α grad)) ≤ J(c) - σ α ‖grad‖²_g` holds.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::shape::{
    shape_differential, DiscreteCurve, GramOperator, MetricSpec, Point, ShapeError,
    ShapeFunctional, TangentField,
};

/// Gradients with metric norm at or below this are treated as zero.
pub const ZERO_GRADIENT: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescentError {
    #[error("{name} = {value} violates the bound {bound}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },
    #[error("gradient vanishes; no descent direction")]
    ZeroGradient,
    #[error("no step on the backtracking grid satisfies the Armijo condition")]
    LineSearchFailure,
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

type ProjectFn = dyn Fn(&DiscreteCurve, Vec<Point>) -> Vec<Point> + Send + Sync;

/// Re-normalization applied after the ambient shift.
#[derive(Clone)]
pub enum Projection {
    /// Removes the mean of the displacement, keeping the base centroid.
    Recenter,
    /// Keeps each node at its base distance from the origin.
    Radial,
    /// Arbitrary map `(base, shifted nodes) ↦ projected nodes`. It must
    /// return the base nodes unchanged when they are passed in.
    Custom(Arc<ProjectFn>),
}

impl fmt::Debug for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Recenter => f.write_str("Recenter"),
            Self::Radial => f.write_str("Radial"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Turns a tangent field at a curve into a new curve.
#[derive(Debug, Clone)]
pub enum Retraction {
    /// `R_c(ξ) = c + ξ`.
    Shift,
    /// `R_c(ξ) = P(c + ξ)`.
    ShiftProject(Projection),
}

impl Retraction {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Shift => "shift",
            Self::ShiftProject(_) => "shift_project",
        }
    }

    /// Node positions of `R_c(ξ)` without validating the result.
    pub fn retract_nodes(&self, c: &DiscreteCurve, xi: &TangentField) -> Vec<Point> {
        let shifted = || -> Vec<Point> {
            c.nodes()
                .iter()
                .zip(xi.values())
                .map(|(p, v)| [p[0] + v[0], p[1] + v[1]])
                .collect()
        };
        match self {
            Self::Shift => shifted(),
            Self::ShiftProject(Projection::Recenter) => {
                let n = xi.len() as f64;
                let mean = xi
                    .values()
                    .iter()
                    .fold([0.0, 0.0], |m, v| [m[0] + v[0] / n, m[1] + v[1] / n]);
                c.nodes()
                    .iter()
                    .zip(xi.values())
                    .map(|(p, v)| [p[0] + (v[0] - mean[0]), p[1] + (v[1] - mean[1])])
                    .collect()
            }
            Self::ShiftProject(Projection::Radial) => c
                .nodes()
                .iter()
                .zip(xi.values())
                .map(|(p, v)| {
                    if v[0] == 0.0 && v[1] == 0.0 {
                        return *p;
                    }
                    let q = [p[0] + v[0], p[1] + v[1]];
                    let s = p[0].hypot(p[1]) / q[0].hypot(q[1]);
                    [s * q[0], s * q[1]]
                })
                .collect(),
            Self::ShiftProject(Projection::Custom(f)) => f(c, shifted()),
        }
    }

    pub fn retract(&self, c: &DiscreteCurve, xi: &TangentField) -> Result<DiscreteCurve, ShapeError> {
        if c.len() != xi.len() {
            return Err(ShapeError::LengthMismatch {
                expected: c.len(),
                found: xi.len(),
            });
        }
        DiscreteCurve::new(self.retract_nodes(c, xi))
    }

    /// Component of `ξ` tangent to the constraint set the projection preserves.
    pub fn project_tangent(&self, c: &DiscreteCurve, xi: &TangentField) -> TangentField {
        match self {
            Self::Shift => xi.clone(),
            Self::ShiftProject(Projection::Recenter) => {
                let n = xi.len() as f64;
                let mean = xi
                    .values()
                    .iter()
                    .fold([0.0, 0.0], |m, v| [m[0] + v[0] / n, m[1] + v[1] / n]);
                TangentField::new(
                    xi.values()
                        .iter()
                        .map(|v| [v[0] - mean[0], v[1] - mean[1]])
                        .collect(),
                )
            }
            Self::ShiftProject(Projection::Radial) => TangentField::new(
                c.nodes()
                    .iter()
                    .zip(xi.values())
                    .map(|(p, v)| {
                        let r2 = p[0] * p[0] + p[1] * p[1];
                        let a = (p[0] * v[0] + p[1] * v[1]) / r2;
                        [v[0] - a * p[0], v[1] - a * p[1]]
                    })
                    .collect(),
            ),
            Self::ShiftProject(Projection::Custom(_)) => {
                let h = 1e-7;
                let moved = self.retract_nodes(c, &xi.scaled(h));
                TangentField::new(
                    moved
                        .iter()
                        .zip(c.nodes())
                        .map(|(q, p)| [(q[0] - p[0]) / h, (q[1] - p[1]) / h])
                        .collect(),
                )
            }
        }
    }
}

/// Worst violations of the two retraction axioms at `c`:
/// `max |R(0) - c|` and `max_ξ max_i |(R(tξ) - R(-tξ))/2t - ξ|`.
pub fn retraction_defects(
    r: &Retraction,
    c: &DiscreteCurve,
    directions: &[TangentField],
    t: f64,
) -> (f64, f64) {
    let zero = r.retract_nodes(c, &TangentField::zeros(c.len()));
    let at_zero = zero
        .iter()
        .zip(c.nodes())
        .flat_map(|(a, b)| [(a[0] - b[0]).abs(), (a[1] - b[1]).abs()])
        .fold(0.0, f64::max);
    let mut deriv = 0.0f64;
    for xi in directions {
        let fwd = r.retract_nodes(c, &xi.scaled(t));
        let bwd = r.retract_nodes(c, &xi.scaled(-t));
        for ((q, p), v) in fwd.iter().zip(&bwd).zip(xi.values()) {
            for axis in 0..2 {
                deriv = deriv.max(((q[axis] - p[axis]) / (2.0 * t) - v[axis]).abs());
            }
        }
    }
    (at_zero, deriv)
}

/// Backtracking constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmijoParams {
    pub alpha_hat: f64,
    pub sigma: f64,
    pub rho: f64,
    pub max_backtracks: u32,
    pub max_iters: usize,
    pub grad_tol: f64,
}

impl Default for ArmijoParams {
    fn default() -> Self {
        Self {
            alpha_hat: 1.0,
            sigma: 1e-4,
            rho: 0.5,
            max_backtracks: 50,
            max_iters: 500,
            grad_tol: 1e-6,
        }
    }
}

impl ArmijoParams {
    pub fn validate(&self) -> Result<(), DescentError> {
        let bad = |name, value: f64, bound| {
            Err(DescentError::InvalidParameter { name, value, bound })
        };
        if !(self.alpha_hat > 0.0 && self.alpha_hat.is_finite()) {
            return bad("alpha_hat", self.alpha_hat, "(0,inf)");
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return bad("sigma", self.sigma, "(0,1)");
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad("rho", self.rho, "(0,1)");
        }
        if self.max_backtracks == 0 {
            return bad("max_backtracks", 0.0, "[1,inf)");
        }
        if self.max_iters == 0 {
            return bad("max_iters", 0.0, "[1,inf)");
        }
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol", self.grad_tol, "(0,inf)");
        }
        Ok(())
    }

    /// Trial step `α̂ ρ^m`.
    pub fn step(&self, m: u32) -> f64 {
        self.alpha_hat * self.rho.powi(m as i32)
    }
}

/// Generic backtracking loop. `trial(α)` returns the objective at the
/// retracted point (or `None` when the trial point is inadmissible).
/// Returns the accepted `(α, point, objective)`.
pub fn armijo_backtrack<P>(
    f0: f64,
    grad_norm: f64,
    p: &ArmijoParams,
    mut trial: impl FnMut(f64) -> Option<(f64, P)>,
) -> Result<(f64, P, f64), DescentError> {
    if !(grad_norm > ZERO_GRADIENT) {
        return Err(DescentError::ZeroGradient);
    }
    for m in 0..=p.max_backtracks {
        let alpha = p.step(m);
        if let Some((f, point)) = trial(alpha) {
            if f <= f0 - p.sigma * alpha * (grad_norm * grad_norm) {
                return Ok((alpha, point, f));
            }
        }
    }
    Err(DescentError::LineSearchFailure)
}

/// Accepted Armijo step.
#[derive(Debug, Clone)]
pub struct ArmijoStep {
    pub step: f64,
    pub next: DiscreteCurve,
    pub objective: f64,
}

/// Largest `α ∈ {α̂ ρ^m}` with `J(R_c(-α grad)) ≤ J(c) - σ α ‖grad‖²_g`.
pub fn armijo_step(
    j: &ShapeFunctional,
    c: &DiscreteCurve,
    grad: &TangentField,
    g: &GramOperator,
    r: &Retraction,
    p: &ArmijoParams,
) -> Result<ArmijoStep, DescentError> {
    let grad_norm = g.norm_sq(grad)?.max(0.0).sqrt();
    armijo_step_with_norm(j, c, j.eval(c), grad, grad_norm, r, p)
}

fn armijo_step_with_norm(
    j: &ShapeFunctional,
    c: &DiscreteCurve,
    f0: f64,
    grad: &TangentField,
    grad_norm: f64,
    r: &Retraction,
    p: &ArmijoParams,
) -> Result<ArmijoStep, DescentError> {
    let (step, next, objective) = armijo_backtrack(f0, grad_norm, p, |alpha| {
        let next = r.retract(c, &grad.scaled(-alpha)).ok()?;
        let f = j.eval(&next);
        f.is_finite().then_some((f, next))
    })?;
    Ok(ArmijoStep {
        step,
        next,
        objective,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIters,
    LineSearchFailure,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIters => "max_iters",
            Self::LineSearchFailure => "line_search_failure",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the differential of the objective is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DifferentialMode {
    #[default]
    Analytic,
    FiniteDifference,
}

/// Record of a descent run. `grad_norms[k]` and `objectives[k]` belong to
/// `iterates[k]`; `step_sizes[k]` moved iterate `k` to `k + 1`.
#[derive(Debug, Clone)]
pub struct DescentTrace {
    pub iterates: Vec<DiscreteCurve>,
    pub objectives: Vec<f64>,
    pub step_sizes: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub termination: Termination,
}

impl DescentTrace {
    pub fn iterations(&self) -> usize {
        self.step_sizes.len()
    }

    pub fn final_curve(&self) -> &DiscreteCurve {
        self.iterates.last().expect("trace holds the initial curve")
    }

    pub fn final_objective(&self) -> f64 {
        *self.objectives.last().expect("trace holds the initial objective")
    }

    /// Index of the first accepted step violating the Armijo inequality.
    pub fn first_armijo_violation(&self, sigma: f64) -> Option<usize> {
        (0..self.step_sizes.len()).find(|&k| {
            let (a, g) = (self.step_sizes[k], self.grad_norms[k]);
            !(self.objectives[k + 1] <= self.objectives[k] - sigma * a * (g * g))
        })
    }

    /// Whether every step equals `α̂ ρ^m` for some admissible `m`.
    pub fn steps_on_grid(&self, p: &ArmijoParams) -> bool {
        self.step_sizes
            .iter()
            .all(|&a| (0..=p.max_backtracks).any(|m| p.step(m) == a))
    }
}

/// Steepest descent with the metric re-assembled at every iterate.
pub fn steepest_descent(
    j: &ShapeFunctional,
    c0: &DiscreteCurve,
    metric: &MetricSpec,
    r: &Retraction,
    p: &ArmijoParams,
) -> Result<DescentTrace, DescentError> {
    steepest_descent_with(j, c0, metric, r, p, DifferentialMode::Analytic)
}

pub fn steepest_descent_with(
    j: &ShapeFunctional,
    c0: &DiscreteCurve,
    metric: &MetricSpec,
    r: &Retraction,
    p: &ArmijoParams,
    mode: DifferentialMode,
) -> Result<DescentTrace, DescentError> {
    p.validate()?;
    let f0 = j.eval(c0);
    if !f0.is_finite() {
        return Err(ShapeError::NonFiniteObjective.into());
    }
    let mut trace = DescentTrace {
        iterates: vec![c0.clone()],
        objectives: vec![f0],
        step_sizes: Vec::new(),
        grad_norms: Vec::new(),
        termination: Termination::MaxIters,
    };
    let tol = p.grad_tol.max(ZERO_GRADIENT);
    loop {
        let c = trace.iterates.last().expect("non-empty").clone();
        let f = *trace.objectives.last().expect("non-empty");
        let g = metric.assemble(&c)?;
        let df = match mode {
            DifferentialMode::Analytic => j.analytic_differential(&c)?,
            DifferentialMode::FiniteDifference => shape_differential(j, &c)?,
        };
        let grad = g.solve(&df)?;
        let grad_norm = g.norm_sq(&grad)?.max(0.0).sqrt();
        trace.grad_norms.push(grad_norm);
        if grad_norm <= tol {
            trace.termination = Termination::Converged;
            break;
        }
        if trace.step_sizes.len() >= p.max_iters {
            trace.termination = Termination::MaxIters;
            break;
        }
        match armijo_step_with_norm(j, &c, f, &grad, grad_norm, r, p) {
            Ok(step) => {
                trace.step_sizes.push(step.step);
                trace.objectives.push(step.objective);
                trace.iterates.push(step.next);
            }
            Err(DescentError::LineSearchFailure) => {
                trace.termination = Termination::LineSearchFailure;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(trace)
}
