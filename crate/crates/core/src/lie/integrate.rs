//! Geometric integration of logarithmic equations.
//!
//! Each step multiplies by the exact exponential of the fourth-order Magnus
//! truncation built from two Gauss–Legendre samples of the field, so every
//! sample stays in the group up to the accuracy of `expm`.

use super::expm::{commutator, expm, inverse, Mat};
use super::group::{AlgebraPath, GroupPath, MatrixGroupSpec, Side};
use super::LieError;

/// Minimum number of uniform steps accepted by [`solve_logarithmic`].
pub const MIN_STEPS: usize = 8;
/// Endpoint membership residual above which the step is declared too coarse.
pub const ENDPOINT_TOL: f64 = 1e-6;

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // √3 / 6
const MAGNUS_COMMUTATOR: f64 = 0.144_337_567_297_406_43; // √3 / 12

/// One step of length `h` from `t0`: the factor `E` with `g(t0 + h) = E g(t0)`
/// (right) or `g(t0 + h) = g(t0) E` (left).
pub(crate) fn magnus_factor(v: &dyn Fn(f64) -> Mat, t0: f64, h: f64, side: Side) -> Mat {
    let a1 = v(t0 + (0.5 - GAUSS_OFFSET) * h);
    let a2 = v(t0 + (0.5 + GAUSS_OFFSET) * h);
    let bracket = commutator(&a2, &a1) * (MAGNUS_COMMUTATOR * h * h);
    let mean = (&a1 + &a2) * (0.5 * h);
    let omega = match side {
        Side::Right => mean + bracket,
        Side::Left => mean - bracket,
    };
    expm(&omega)
}

/// Integrates the logarithmic equation on the time grid `times` from `g0`.
pub(crate) fn integrate_on_grid(
    v: &dyn Fn(f64) -> Mat,
    times: &[f64],
    side: Side,
    g0: Mat,
) -> Vec<(f64, Mat)> {
    let mut out = Vec::with_capacity(times.len());
    let mut g = g0;
    out.push((times[0], g.clone()));
    for w in times.windows(2) {
        let e = magnus_factor(v, w[0], w[1] - w[0], side);
        g = match side {
            Side::Right => e * g,
            Side::Left => g * e,
        };
        out.push((w[1], g.clone()));
    }
    out
}

pub(crate) fn uniform_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|j| j as f64 / steps as f64).collect()
}

/// Solves `∂_t g g⁻¹ = v` (right) or `g⁻¹ ∂_t g = v` (left) with `g(0) = I`
/// on `[0, 1]` using `steps` uniform steps.
pub fn solve_logarithmic(
    v: &AlgebraPath,
    spec: &MatrixGroupSpec,
    steps: usize,
    side: Side,
) -> Result<GroupPath, LieError> {
    if steps < MIN_STEPS {
        return Err(LieError::InvalidSteps(steps));
    }
    v.check(spec)?;
    let d = spec.dim();
    let f = |t: f64| v.eval(t);
    let samples = integrate_on_grid(&f, &uniform_grid(steps), side, Mat::identity(d, d));
    let end = spec.membership_residual(&samples.last().expect("non-empty").1);
    if !(end <= ENDPOINT_TOL) {
        return Err(LieError::StepTooCoarse(end));
    }
    GroupPath::new(samples, spec.clone())
}

/// Solution of `dS/dt = [A(t), S(t)]`, `S(0) = S0`, as `S(t) = G S0 G⁻¹` with
/// `∂_t G G⁻¹ = A`.
pub fn adjoint_flow(
    a: &AlgebraPath,
    s0: &Mat,
    spec: &MatrixGroupSpec,
    steps: usize,
) -> Result<Vec<(f64, Mat)>, LieError> {
    let r = spec.algebra_residual(s0);
    if !(r <= super::group::ALGEBRA_TOL) {
        return Err(LieError::AlgebraViolation { t: 0.0, residual: r });
    }
    let g = solve_logarithmic(a, spec, steps, Side::Right)?;
    g.samples()
        .iter()
        .map(|(t, m)| Ok((*t, m * s0 * inverse(m)?)))
        .collect()
}

/// Largest `|dS/dt - [A, S]|` over samples `2..n-2`, with five-point
/// differences of a uniformly sampled solution.
pub fn adjoint_residual(a: &AlgebraPath, samples: &[(f64, Mat)]) -> f64 {
    if samples.len() < 5 {
        return f64::INFINITY;
    }
    let h = samples[1].0 - samples[0].0;
    (2..samples.len() - 2)
        .map(|j| {
            let d = (&samples[j - 2].1 - &samples[j - 1].1 * 8.0 + &samples[j + 1].1 * 8.0
                - &samples[j + 2].1)
                / (12.0 * h);
            let (t, s) = &samples[j];
            (d - commutator(&a.eval(*t), s)).amax()
        })
        .fold(0.0, f64::max)
}
