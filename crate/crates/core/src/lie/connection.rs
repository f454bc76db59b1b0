//! Connections on trivial bundles `ℝ^m × G`, curvature, horizontal lifts and
//! holonomy.
//!
//! Curvature is `Ω(u, w) = dθ(u, w) - [θ(u), θ(w)]`. Under this convention the
//! flat forms are the right Maurer–Cartan forms `df f⁻¹`.

use std::fmt;
use std::sync::Arc;

use super::expm::{commutator, expm, Mat};
use crate::smooth::Polynomial;
use super::group::{GroupPath, MatrixGroupSpec, Side, ALGEBRA_TOL, MEMBERSHIP_TOL};
use super::integrate::{integrate_on_grid, MIN_STEPS, ENDPOINT_TOL};
use super::LieError;

/// Central-difference step of the exterior derivative in [`curvature`].
pub const CURVATURE_STEP: f64 = 1e-5;
/// Largest gap between the endpoints of a loop.
pub const LOOP_TOL: f64 = 1e-12;

type ThetaFn = dyn Fn(&[f64], &[f64]) -> Mat + Send + Sync;

/// A 𝔤-valued 1-form `θ(x)(u)` on `ℝ^m`.
#[derive(Clone)]
pub struct ConnectionForm {
    base_dim: usize,
    dim: usize,
    theta: Arc<ThetaFn>,
}

impl fmt::Debug for ConnectionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectionForm")
            .field("base_dim", &self.base_dim)
            .field("dim", &self.dim)
            .finish()
    }
}

fn probe_point(m: usize, seed: usize) -> Vec<f64> {
    (0..m)
        .map(|i| ((seed * 7 + i * 3) as f64 * 0.618_033_988_749_895).fract() * 2.0 - 1.0)
        .collect()
}

impl ConnectionForm {
    /// Wraps `θ(x, u)` and checks linearity in `u` on a few fixed probes.
    pub fn new<F>(base_dim: usize, dim: usize, theta: F) -> Result<Self, LieError>
    where
        F: Fn(&[f64], &[f64]) -> Mat + Send + Sync + 'static,
    {
        let form = Self {
            base_dim,
            dim,
            theta: Arc::new(theta),
        };
        let defect = form.linearity_defect(4);
        if !(defect <= 1e-10) {
            return Err(LieError::NonLinearConnection { defect });
        }
        Ok(form)
    }

    /// `θ(x) = Σ_i F_i(x) dx_i`; linear by construction.
    pub fn from_components<F>(base_dim: usize, dim: usize, components: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<Mat> + Send + Sync + 'static,
    {
        Self {
            base_dim,
            dim,
            theta: Arc::new(move |x: &[f64], u: &[f64]| {
                let mut acc = Mat::zeros(dim, dim);
                for (f, ui) in components(x).iter().zip(u) {
                    acc += f * *ui;
                }
                acc
            }),
        }
    }

    /// `θ = Σ_i A_i dx_i` with constant `A_i`.
    pub fn constant(generators: Vec<Mat>) -> Self {
        let dim = generators.first().map_or(0, Mat::nrows);
        let base_dim = generators.len();
        Self::from_components(base_dim, dim, move |_| generators.clone())
    }

    pub fn zero(base_dim: usize, dim: usize) -> Self {
        Self::constant(vec![Mat::zeros(dim, dim); base_dim])
    }

    /// Right Maurer–Cartan pullback `df₀ f₀⁻¹` of a group-valued map. The
    /// closure returns `f₀(x)` together with its partial derivatives.
    pub fn right_maurer_cartan<F>(base_dim: usize, dim: usize, f0: F) -> Self
    where
        F: Fn(&[f64]) -> (Mat, Vec<Mat>) + Send + Sync + 'static,
    {
        Self::from_components(base_dim, dim, move |x| {
            let (f, partials) = f0(x);
            let fi = f.clone().try_inverse().unwrap_or_else(|| Mat::zeros(dim, dim));
            partials.iter().map(|d| d * &fi).collect()
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64], u: &[f64]) -> Mat {
        (self.theta)(x, u)
    }

    /// Largest `|θ(x, au + bw) - aθ(x, u) - bθ(x, w)|` over `samples`
    /// deterministic probes.
    pub fn linearity_defect(&self, samples: usize) -> f64 {
        let m = self.base_dim;
        (0..samples)
            .map(|s| {
                let x = probe_point(m, 3 * s + 1);
                let u = probe_point(m, 3 * s + 2);
                let w = probe_point(m, 3 * s + 3);
                let (a, b) = (0.7 - s as f64 * 0.3, 1.3 + s as f64 * 0.2);
                let mix: Vec<f64> = u.iter().zip(&w).map(|(ui, wi)| a * ui + b * wi).collect();
                let lhs = self.eval(&x, &mix);
                let rhs = self.eval(&x, &u) * a + self.eval(&x, &w) * b;
                (lhs - rhs).amax() / (1.0 + self.eval(&x, &mix).amax())
            })
            .fold(0.0, f64::max)
    }
}

/// The group-valued map `x ↦ exp(a_1(x) A_1) ⋯ exp(a_k(x) A_k)` with
/// polynomial coefficients `a_i`.
#[derive(Debug, Clone)]
pub struct ExpProduct {
    base_dim: usize,
    dim: usize,
    factors: Vec<(Polynomial, Vec<Polynomial>, Mat)>,
}

impl ExpProduct {
    pub fn new(factors: Vec<(Polynomial, Mat)>) -> Result<Self, LieError> {
        let (first_poly, first_gen) = factors.first().ok_or(LieError::EmptyPath)?;
        let (base_dim, dim) = (first_poly.nvars(), first_gen.nrows());
        let mut out = Vec::with_capacity(factors.len());
        for (p, a) in factors {
            if p.nvars() != base_dim {
                return Err(LieError::DimensionMismatch {
                    expected: base_dim,
                    found: p.nvars(),
                });
            }
            if a.nrows() != dim || a.ncols() != dim {
                return Err(LieError::DimensionMismatch {
                    expected: dim,
                    found: a.nrows(),
                });
            }
            let partials = (0..base_dim).map(|i| p.partial(i)).collect();
            out.push((p, partials, a));
        }
        Ok(Self {
            base_dim,
            dim,
            factors: out,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn eval(&self, x: &[f64]) -> Mat {
        self.factors
            .iter()
            .fold(Mat::identity(self.dim, self.dim), |acc, (p, _, a)| acc * expm(&(a * p.eval(x))))
    }

    /// `f(x)` and its partial derivatives.
    pub fn eval_with_partials(&self, x: &[f64]) -> (Mat, Vec<Mat>) {
        let exps: Vec<Mat> = self.factors.iter().map(|(p, _, a)| expm(&(a * p.eval(x)))).collect();
        let k = exps.len();
        // prefix[i] = E_0 ⋯ E_{i-1}, suffix[i] = E_i ⋯ E_{k-1}
        let mut prefix = vec![Mat::identity(self.dim, self.dim)];
        for e in &exps {
            let next = prefix.last().expect("non-empty") * e;
            prefix.push(next);
        }
        let mut suffix = vec![Mat::identity(self.dim, self.dim); k + 1];
        for i in (0..k).rev() {
            suffix[i] = &exps[i] * &suffix[i + 1];
        }
        let partials = (0..self.base_dim)
            .map(|d| {
                let mut acc = Mat::zeros(self.dim, self.dim);
                for (i, (_, dp, a)) in self.factors.iter().enumerate() {
                    let c = dp[d].eval(x);
                    if c != 0.0 {
                        acc += &prefix[i] * a * &suffix[i] * c;
                    }
                }
                acc
            })
            .collect();
        (prefix[k].clone(), partials)
    }

    /// The flat connection `df f⁻¹`.
    pub fn maurer_cartan(&self) -> ConnectionForm {
        let f = self.clone();
        ConnectionForm::right_maurer_cartan(self.base_dim, self.dim, move |x| f.eval_with_partials(x))
    }
}

/// `Ω(x)(u, w) = dθ(x)(u, w) - [θ(x)(u), θ(x)(w)]` with `dθ` by central
/// differences of step [`CURVATURE_STEP`].
pub fn curvature(theta: &ConnectionForm, x: &[f64], u: &[f64], w: &[f64]) -> Result<Mat, LieError> {
    let m = theta.base_dim();
    for v in [x, u, w] {
        if v.len() != m {
            return Err(LieError::DimensionMismatch {
                expected: m,
                found: v.len(),
            });
        }
    }
    let uu: f64 = u.iter().map(|a| a * a).sum();
    let ww: f64 = w.iter().map(|a| a * a).sum();
    let uw: f64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
    if !(uu * ww - uw * uw > 1e-24 * uu * ww) || uu == 0.0 || ww == 0.0 {
        return Err(LieError::LinearlyDependent);
    }
    let h = CURVATURE_STEP;
    let shifted = |dir: &[f64], s: f64| -> Vec<f64> { x.iter().zip(dir).map(|(a, b)| a + s * b).collect() };
    let d_u_of_w = (theta.eval(&shifted(u, h), w) - theta.eval(&shifted(u, -h), w)) / (2.0 * h);
    let d_w_of_u = (theta.eval(&shifted(w, h), u) - theta.eval(&shifted(w, -h), u)) / (2.0 * h);
    Ok(d_u_of_w - d_w_of_u - commutator(&theta.eval(x, u), &theta.eval(x, w)))
}

type PointFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

#[derive(Clone)]
struct Piece {
    t0: f64,
    t1: f64,
    pos: Arc<PointFn>,
    vel: Arc<PointFn>,
}

/// A piecewise smooth path `[0, 1] → ℝ^m`, with explicit velocity.
#[derive(Clone)]
pub struct BasePath {
    dim: usize,
    pieces: Vec<Piece>,
}

impl fmt::Debug for BasePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasePath")
            .field("dim", &self.dim)
            .field("pieces", &self.pieces.len())
            .finish()
    }
}

impl BasePath {
    /// A smooth path from a position map and its derivative.
    pub fn from_fn<P, V>(dim: usize, pos: P, vel: V) -> Self
    where
        P: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        V: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            pieces: vec![Piece {
                t0: 0.0,
                t1: 1.0,
                pos: Arc::new(pos),
                vel: Arc::new(vel),
            }],
        }
    }

    /// Straight segment from `a` to `b`.
    pub fn segment(a: Vec<f64>, b: Vec<f64>) -> Self {
        let d: Vec<f64> = b.iter().zip(&a).map(|(p, q)| p - q).collect();
        let d2 = d.clone();
        Self::from_fn(
            a.len(),
            move |t| a.iter().zip(&d).map(|(p, q)| p + t * q).collect(),
            move |_| d2.clone(),
        )
    }

    /// Polygonal path through `vertices`, equal time per segment.
    pub fn polygon(vertices: &[Vec<f64>]) -> Result<Self, LieError> {
        if vertices.len() < 2 {
            return Err(LieError::EmptyPath);
        }
        let dim = vertices[0].len();
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(LieError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let n = (vertices.len() - 1) as f64;
        let pieces = vertices
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let (t0, t1) = (k as f64 / n, (k + 1) as f64 / n);
                let a = w[0].clone();
                let d: Vec<f64> = w[1].iter().zip(&w[0]).map(|(p, q)| (p - q) * n).collect();
                let d2 = d.clone();
                Piece {
                    t0,
                    t1,
                    pos: Arc::new(move |t| a.iter().zip(&d).map(|(p, q)| p + (t - t0) * q).collect()),
                    vel: Arc::new(move |_| d2.clone()),
                }
            })
            .collect();
        Ok(Self { dim, pieces })
    }

    /// Counter-clockwise circle in the plane.
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        let tau = std::f64::consts::TAU;
        Self::from_fn(
            2,
            move |t| {
                let a = tau * t;
                vec![center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            },
            move |t| {
                let a = tau * t;
                vec![-tau * radius * a.sin(), tau * radius * a.cos()]
            },
        )
    }

    /// Axis-aligned counter-clockwise square with lower-left corner `origin`.
    pub fn square(origin: [f64; 2], side: f64) -> Self {
        let [x, y] = origin;
        Self::polygon(&[
            vec![x, y],
            vec![x + side, y],
            vec![x + side, y + side],
            vec![x, y + side],
            vec![x, y],
        ])
        .expect("five planar vertices")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn piece_at(&self, t: f64) -> &Piece {
        self.pieces
            .iter()
            .find(|p| t <= p.t1)
            .unwrap_or_else(|| self.pieces.last().expect("non-empty"))
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        (self.piece_at(t).pos)(t)
    }

    pub fn velocity(&self, t: f64) -> Vec<f64> {
        (self.piece_at(t).vel)(t)
    }

    pub fn start(&self) -> Vec<f64> {
        let p = &self.pieces[0];
        (p.pos)(p.t0)
    }

    pub fn end(&self) -> Vec<f64> {
        let p = self.pieces.last().expect("non-empty");
        (p.pos)(p.t1)
    }

    /// Breakpoints `0 = s_0 < … < s_k = 1` between smooth pieces.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend(self.pieces.iter().map(|p| p.t1));
        b
    }

    /// `t ↦ γ(1 - t)`.
    pub fn reverse(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| {
                let (pos, vel) = (Arc::clone(&p.pos), Arc::clone(&p.vel));
                Piece {
                    t0: 1.0 - p.t1,
                    t1: 1.0 - p.t0,
                    pos: Arc::new(move |t| pos(1.0 - t)),
                    vel: Arc::new(move |t| vel(1.0 - t).into_iter().map(|v| -v).collect()),
                }
            })
            .collect();
        Self { dim: self.dim, pieces }
    }

    /// Runs `self` on `[0, ½]` and `next` on `[½, 1]`.
    pub fn concat(&self, next: &Self) -> Result<Self, LieError> {
        if self.dim != next.dim {
            return Err(LieError::DimensionMismatch {
                expected: self.dim,
                found: next.dim,
            });
        }
        let gap = dist(&self.end(), &next.start());
        if !(gap <= LOOP_TOL) {
            return Err(LieError::Discontinuous { gap });
        }
        let rescale = |p: &Piece, offset: f64| {
            let (pos, vel) = (Arc::clone(&p.pos), Arc::clone(&p.vel));
            Piece {
                t0: offset + 0.5 * p.t0,
                t1: offset + 0.5 * p.t1,
                pos: Arc::new(move |t| pos(2.0 * (t - offset))),
                vel: Arc::new(move |t| vel(2.0 * (t - offset)).into_iter().map(|v| 2.0 * v).collect()),
            }
        };
        let mut pieces: Vec<Piece> = self.pieces.iter().map(|p| rescale(p, 0.0)).collect();
        pieces.extend(next.pieces.iter().map(|p| rescale(p, 0.5)));
        Ok(Self { dim: self.dim, pieces })
    }

    /// Time grid with about `steps` uniform steps, refined so that every
    /// breakpoint is a grid node.
    fn time_grid(&self, steps: usize) -> Vec<f64> {
        let mut grid = vec![0.0];
        for p in &self.pieces {
            let k = ((steps as f64 * (p.t1 - p.t0)).round() as usize).max(1);
            grid.extend((1..=k).map(|j| p.t0 + (p.t1 - p.t0) * j as f64 / k as f64));
        }
        grid
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Horizontal lift of `gamma` starting at `g0`: the group factor is
/// `γ_G(t) g0` where `γ_G⁻¹ ∂_t γ_G = -θ(γ(t))(γ'(t))`, `γ_G(0) = I`.
pub fn horizontal_lift(
    gamma: &BasePath,
    theta: &ConnectionForm,
    g0: &Mat,
    spec: &MatrixGroupSpec,
    steps: usize,
) -> Result<GroupPath, LieError> {
    if steps < MIN_STEPS {
        return Err(LieError::InvalidSteps(steps));
    }
    if gamma.dim() != theta.base_dim() {
        return Err(LieError::DimensionMismatch {
            expected: theta.base_dim(),
            found: gamma.dim(),
        });
    }
    let d = spec.dim();
    if theta.dim() != d || g0.nrows() != d || g0.ncols() != d {
        return Err(LieError::DimensionMismatch {
            expected: d,
            found: theta.dim(),
        });
    }
    let r = spec.membership_residual(g0);
    if !(r <= MEMBERSHIP_TOL) {
        return Err(LieError::NotInGroup { t: 0.0, residual: r });
    }
    let field = |t: f64| -theta.eval(&gamma.point(t), &gamma.velocity(t));
    let grid = gamma.time_grid(steps);
    for t in grid.windows(2).map(|w| 0.5 * (w[0] + w[1])) {
        let residual = spec.algebra_residual(&field(t));
        if !(residual <= ALGEBRA_TOL * (1.0 + field(t).amax())) {
            return Err(LieError::AlgebraViolation { t, residual });
        }
    }
    let samples: Vec<(f64, Mat)> = integrate_on_grid(&field, &grid, Side::Left, Mat::identity(d, d))
        .into_iter()
        .map(|(t, g)| (t, g * g0))
        .collect();
    let end = spec.membership_residual(&samples.last().expect("non-empty").1);
    if !(end <= ENDPOINT_TOL) {
        return Err(LieError::StepTooCoarse(end));
    }
    GroupPath::new(samples, spec.clone())
}

/// Group factor of the horizontal lift of a closed path at `t = 1`, starting
/// from the identity.
pub fn holonomy(
    lp: &BasePath,
    theta: &ConnectionForm,
    spec: &MatrixGroupSpec,
    steps: usize,
) -> Result<Mat, LieError> {
    let gap = dist(&lp.start(), &lp.end());
    if !(gap <= LOOP_TOL) {
        return Err(LieError::NotALoop { gap });
    }
    let d = spec.dim();
    let lift = horizontal_lift(lp, theta, &Mat::identity(d, d), spec, steps)?;
    Ok(lift.endpoint().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::expm::expm;

    fn gens() -> (Mat, Mat) {
        let a = Mat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let b = Mat::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
        (a, b)
    }

    #[test]
    fn zero_form_is_flat_and_lifts_trivially() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        let theta = ConnectionForm::zero(2, 3);
        let om = curvature(&theta, &[0.2, 0.3], &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(om.amax(), 0.0);
        let g0 = expm(&(gens().0 * 0.4));
        let lift = horizontal_lift(&BasePath::circle([0.0, 0.0], 1.0), &theta, &g0, &so3, 32).unwrap();
        assert!(lift.samples().iter().all(|(_, g)| *g == g0));
        let hol = holonomy(&BasePath::circle([0.0, 0.0], 1.0), &theta, &so3, 32).unwrap();
        assert_eq!(hol, Mat::identity(3, 3));
    }

    #[test]
    fn constant_form_curvature_is_minus_bracket() {
        let (a, b) = gens();
        let theta = ConnectionForm::constant(vec![a.clone(), b.clone()]);
        let om = curvature(&theta, &[0.1, -0.4], &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((om + commutator(&a, &b)).amax() < 1e-12);
        assert_eq!(
            curvature(&theta, &[0.0, 0.0], &[1.0, 2.0], &[2.0, 4.0]).unwrap_err(),
            LieError::LinearlyDependent
        );
    }

    #[test]
    fn constant_field_lift_closed_form() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        let (a, _) = gens();
        let theta = ConnectionForm::constant(vec![a.clone()]);
        let gamma = BasePath::segment(vec![0.0], vec![1.0]);
        let lift = horizontal_lift(&gamma, &theta, &Mat::identity(3, 3), &so3, 16).unwrap();
        for (t, g) in lift.samples() {
            assert!((g - expm(&(&a * -*t))).amax() < 1e-13);
        }
    }

    #[test]
    fn lift_is_right_equivariant() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        let (a, b) = gens();
        let theta = ConnectionForm::from_components(2, 3, move |x| {
            vec![&a * x[1].cos(), &b * (1.0 + x[0] * x[0])]
        });
        let gamma = BasePath::circle([0.3, 0.1], 0.5);
        let g0 = expm(&(gens().1 * 0.3));
        let h = expm(&(gens().0 * -1.1));
        let lhs = horizontal_lift(&gamma, &theta, &(&g0 * &h), &so3, 64).unwrap();
        let rhs = horizontal_lift(&gamma, &theta, &g0, &so3, 64).unwrap().right_mul(&h);
        assert!(lhs.max_distance(&rhs) <= 1e-9);
    }

    #[test]
    fn small_square_holonomy() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        let (a, b) = gens();
        let theta = ConnectionForm::constant(vec![a.clone(), b.clone()]);
        let eps = 0.05;
        let hol = holonomy(&BasePath::square([0.0, 0.0], eps), &theta, &so3, 16).unwrap();
        // closed form of the four exact segment flows
        let expected = expm(&(&a * -eps)) * expm(&(&b * -eps)) * expm(&(&a * eps)) * expm(&(&b * eps));
        assert!((hol - expected).amax() < 1e-14);
    }

    #[test]
    fn loop_then_reverse_is_trivial() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        let (a, b) = gens();
        let theta = ConnectionForm::from_components(2, 3, move |x| {
            vec![&a * (x[0] + x[1]).sin(), &b * x[0]]
        });
        let c = BasePath::circle([0.5, 0.5], 0.3);
        let both = c.concat(&c.reverse()).unwrap();
        let hol = holonomy(&both, &theta, &so3, 128).unwrap();
        assert!((hol - Mat::identity(3, 3)).amax() <= 1e-8);
    }

    #[test]
    fn open_path_is_not_a_loop() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        let theta = ConnectionForm::zero(2, 3);
        let path = BasePath::segment(vec![0.0, 0.0], vec![1.0, 0.0]);
        assert!(matches!(holonomy(&path, &theta, &so3, 16), Err(LieError::NotALoop { .. })));
    }

    #[test]
    fn exp_product_partials_match_differences() {
        let (a, b) = gens();
        let f = ExpProduct::new(vec![
            (Polynomial::new(2, vec![(1.0, vec![1, 0]), (0.5, vec![0, 2])]).unwrap(), a),
            (Polynomial::new(2, vec![(0.7, vec![1, 1]), (-0.2, vec![0, 1])]).unwrap(), b),
        ])
        .unwrap();
        let x = [0.3, -0.6];
        let (_, d) = f.eval_with_partials(&x);
        let h = 1e-5;
        let dx = (f.eval(&[x[0] + h, x[1]]) - f.eval(&[x[0] - h, x[1]])) / (2.0 * h);
        let dy = (f.eval(&[x[0], x[1] + h]) - f.eval(&[x[0], x[1] - h])) / (2.0 * h);
        assert!((&d[0] - dx).amax() < 1e-9);
        assert!((&d[1] - dy).amax() < 1e-9);
        let om = curvature(&f.maurer_cartan(), &x, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!(om.amax() < 1e-8);
    }

    #[test]
    fn nonlinear_form_is_rejected() {
        let err = ConnectionForm::new(1, 2, |_x, u| Mat::identity(2, 2) * (u[0] * u[0]));
        assert!(matches!(err, Err(LieError::NonLinearConnection { .. })));
    }
}
