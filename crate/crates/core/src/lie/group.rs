use std::fmt;
use std::sync::Arc;

use super::expm::{inverse, Mat};
use super::LieError;

/// Residual tolerance for group samples.
pub const MEMBERSHIP_TOL: f64 = 1e-7;
/// Tolerance for algebra membership of sampled path values.
pub const ALGEBRA_TOL: f64 = 1e-10;

type MembershipFn = dyn Fn(&Mat) -> f64 + Send + Sync;
type ProjectionFn = dyn Fn(&Mat) -> Mat + Send + Sync;

/// A matrix Lie group given by a membership residual and a projection onto
/// its Lie algebra.
#[derive(Clone)]
pub struct MatrixGroupSpec {
    name: String,
    dim: usize,
    membership: Arc<MembershipFn>,
    projection: Arc<ProjectionFn>,
}

impl fmt::Debug for MatrixGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixGroupSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

impl MatrixGroupSpec {
    /// Checks `membership(I) ≤ 1e-12` and idempotence of the projection on a
    /// few fixed probe matrices.
    pub fn new<M, P>(name: impl Into<String>, dim: usize, membership: M, projection: P) -> Result<Self, LieError>
    where
        M: Fn(&Mat) -> f64 + Send + Sync + 'static,
        P: Fn(&Mat) -> Mat + Send + Sync + 'static,
    {
        let spec = Self {
            name: name.into(),
            dim,
            membership: Arc::new(membership),
            projection: Arc::new(projection),
        };
        let id = Mat::identity(dim, dim);
        if (spec.membership)(&id) > 1e-12 {
            return Err(LieError::InvalidGroup("identity fails the membership check".into()));
        }
        for seed in 1..=3u32 {
            let probe = Mat::from_fn(dim, dim, |i, j| {
                (f64::from(seed) * 1.37 + i as f64 * 0.71 - j as f64 * 1.13).sin()
            });
            let once = (spec.projection)(&probe);
            let twice = (spec.projection)(&once);
            if (twice - once).amax() > 1e-12 {
                return Err(LieError::InvalidGroup("projection is not idempotent".into()));
            }
        }
        Ok(spec)
    }

    /// Special orthogonal group `SO(d)`.
    pub fn special_orthogonal(dim: usize) -> Self {
        Self::new(
            format!("SO({dim})"),
            dim,
            move |g: &Mat| {
                let id = Mat::identity(dim, dim);
                (g.transpose() * g - id).norm().max((g.determinant() - 1.0).abs())
            },
            |a: &Mat| (a - a.transpose()) * 0.5,
        )
        .expect("SO(d) is a valid group")
    }

    /// Special linear group `SL(d)`.
    pub fn special_linear(dim: usize) -> Self {
        Self::new(
            format!("SL({dim})"),
            dim,
            |g: &Mat| (g.determinant() - 1.0).abs(),
            move |a: &Mat| a - Mat::identity(dim, dim) * (a.trace() / dim as f64),
        )
        .expect("SL(d) is a valid group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn membership_residual(&self, g: &Mat) -> f64 {
        (self.membership)(g)
    }

    pub fn project(&self, a: &Mat) -> Mat {
        (self.projection)(a)
    }

    /// Distance of `a` from the algebra, `max |P(a) - a|`.
    pub fn algebra_residual(&self, a: &Mat) -> f64 {
        (self.project(a) - a).amax()
    }
}

type PathFn = dyn Fn(f64) -> Mat + Send + Sync;

/// A smooth path `[0, 1] → 𝔤`.
#[derive(Clone)]
pub struct AlgebraPath {
    dim: usize,
    v: Arc<PathFn>,
}

impl fmt::Debug for AlgebraPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraPath").field("dim", &self.dim).finish()
    }
}

impl AlgebraPath {
    pub fn new<F>(dim: usize, v: F) -> Self
    where
        F: Fn(f64) -> Mat + Send + Sync + 'static,
    {
        Self { dim, v: Arc::new(v) }
    }

    pub fn constant(a: Mat) -> Self {
        Self::new(a.nrows(), move |_| a.clone())
    }

    /// `t ↦ a(t) A`.
    pub fn scalar_multiple<F>(a: F, generator: Mat) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(generator.nrows(), move |t| &generator * a(t))
    }

    /// `t ↦ Σ_k C_k t^k`.
    pub fn polynomial(coefficients: Vec<Mat>) -> Self {
        let dim = coefficients.first().map_or(0, Mat::nrows);
        Self::new(dim, move |t| {
            let mut acc = Mat::zeros(dim, dim);
            for c in coefficients.iter().rev() {
                acc = acc * t + c;
            }
            acc
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, t: f64) -> Mat {
        (self.v)(t)
    }

    /// `t ↦ -v(t)`.
    pub fn negated(&self) -> Self {
        let v = Arc::clone(&self.v);
        Self::new(self.dim, move |t| -v(t))
    }

    /// Samples `v` at 33 points of `[0, 1]` and checks algebra membership.
    pub fn check(&self, spec: &MatrixGroupSpec) -> Result<(), LieError> {
        if self.dim != spec.dim() {
            return Err(LieError::DimensionMismatch {
                expected: spec.dim(),
                found: self.dim,
            });
        }
        for k in 0..=32 {
            let t = k as f64 / 32.0;
            let r = spec.algebra_residual(&self.eval(t));
            if !(r <= ALGEBRA_TOL) {
                return Err(LieError::AlgebraViolation { t, residual: r });
            }
        }
        Ok(())
    }
}

/// Time-stamped samples of a path in a matrix group.
#[derive(Debug, Clone)]
pub struct GroupPath {
    samples: Vec<(f64, Mat)>,
    spec: MatrixGroupSpec,
}

impl GroupPath {
    /// Validates membership of every sample.
    pub fn new(samples: Vec<(f64, Mat)>, spec: MatrixGroupSpec) -> Result<Self, LieError> {
        if samples.is_empty() {
            return Err(LieError::EmptyPath);
        }
        for (t, g) in &samples {
            let r = spec.membership_residual(g);
            if !(r <= MEMBERSHIP_TOL) {
                return Err(LieError::NotInGroup { t: *t, residual: r });
            }
        }
        Ok(Self { samples, spec })
    }

    pub fn samples(&self) -> &[(f64, Mat)] {
        &self.samples
    }

    pub fn spec(&self) -> &MatrixGroupSpec {
        &self.spec
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|(t, _)| *t).collect()
    }

    pub fn start(&self) -> &Mat {
        &self.samples[0].1
    }

    pub fn endpoint(&self) -> &Mat {
        &self.samples.last().expect("non-empty").1
    }

    pub fn max_membership_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|(_, g)| self.spec.membership_residual(g))
            .fold(0.0, f64::max)
    }

    /// Right-multiplies every sample by `h`.
    pub fn right_mul(&self, h: &Mat) -> Self {
        Self {
            samples: self.samples.iter().map(|(t, g)| (*t, g * h)).collect(),
            spec: self.spec.clone(),
        }
    }

    /// Largest sample-wise difference `max_j max |g_j - h_j|`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|((_, a), (_, b))| (a - b).amax())
            .fold(0.0, f64::max)
    }
}

/// Pointwise inverse `t ↦ g(t)⁻¹`.
pub fn inverse_path(g: &GroupPath) -> Result<GroupPath, LieError> {
    let samples = g
        .samples
        .iter()
        .map(|(t, m)| inverse(m).map(|i| (*t, i)))
        .collect::<Result<Vec<_>, _>>()?;
    GroupPath::new(samples, g.spec.clone())
}

/// Which logarithmic derivative a path is integrated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `g⁻¹ ∂_t g = v`.
    Left,
    /// `∂_t g g⁻¹ = v`.
    Right,
}

/// Five-point derivative of the samples of a uniformly sampled path at each
/// index `j ∈ [2, n - 3]`.
fn sample_derivatives(path: &GroupPath) -> Result<Vec<(usize, Mat)>, LieError> {
    let s = path.samples();
    if s.len() < 5 {
        return Err(LieError::InvalidSteps(s.len().saturating_sub(1)));
    }
    let h = s[1].0 - s[0].0;
    Ok((2..s.len() - 2)
        .map(|j| {
            let d = (&s[j - 2].1 - &s[j - 1].1 * 8.0 + &s[j + 1].1 * 8.0 - &s[j + 2].1) / (12.0 * h);
            (j, d)
        })
        .collect())
}

/// Logarithmic derivative of a uniformly sampled path by finite differences,
/// at interior samples `(t_j, value)`.
pub fn log_derivative(path: &GroupPath, side: Side) -> Result<Vec<(f64, Mat)>, LieError> {
    sample_derivatives(path)?
        .into_iter()
        .map(|(j, d)| {
            let (t, g) = &path.samples()[j];
            let gi = inverse(g)?;
            Ok((
                *t,
                match side {
                    Side::Left => gi * d,
                    Side::Right => d * gi,
                },
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_groups() {
        let so3 = MatrixGroupSpec::special_orthogonal(3);
        assert_eq!(so3.membership_residual(&Mat::identity(3, 3)), 0.0);
        let reflection = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0]));
        assert!(so3.membership_residual(&reflection) > 1.0);
        let sl2 = MatrixGroupSpec::special_linear(2);
        assert!(sl2.algebra_residual(&Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, -1.0])) == 0.0);
        assert!(sl2.algebra_residual(&Mat::identity(2, 2)) > 0.5);
    }

    #[test]
    fn invalid_group_is_rejected() {
        let err = MatrixGroupSpec::new("bad", 2, |_g: &Mat| 1.0, |a: &Mat| a.clone());
        assert!(matches!(err, Err(LieError::InvalidGroup(_))));
        let err = MatrixGroupSpec::new("bad", 2, |_g: &Mat| 0.0, |a: &Mat| a * 2.0);
        assert!(matches!(err, Err(LieError::InvalidGroup(_))));
    }

    #[test]
    fn algebra_path_check() {
        let so2 = MatrixGroupSpec::special_orthogonal(2);
        let good = AlgebraPath::constant(Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert!(good.check(&so2).is_ok());
        let bad = AlgebraPath::polynomial(vec![
            Mat::zeros(2, 2),
            Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        ]);
        assert!(matches!(bad.check(&so2), Err(LieError::AlgebraViolation { .. })));
    }

    #[test]
    fn inverse_of_rotation_path() {
        let so2 = MatrixGroupSpec::special_orthogonal(2);
        let rot = |a: f64| Mat::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
        let path = GroupPath::new((0..=10).map(|k| (k as f64 / 10.0, rot(k as f64 / 10.0))).collect(), so2.clone()).unwrap();
        let inv = inverse_path(&path).unwrap();
        for (t, g) in inv.samples() {
            assert!((g - rot(-t)).amax() < 1e-15);
        }
        let id = GroupPath::new(vec![(0.0, Mat::identity(2, 2)), (1.0, Mat::identity(2, 2))], so2).unwrap();
        assert_eq!(inverse_path(&id).unwrap().endpoint(), &Mat::identity(2, 2));
    }
}
