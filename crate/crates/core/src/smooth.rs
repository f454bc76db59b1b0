//! Smooth maps between Euclidean spaces.
//!
//! A [`SmoothMap`] is either a vector of multivariate polynomials (exact
//! derivatives) or an opaque closure (finite-difference derivatives).

use std::fmt;
use std::sync::Arc;

use crate::diffeo::DiffeoError;

/// Step used for finite-difference directional derivatives of opaque maps.
pub const FD_STEP: f64 = 1e-5;

/// A real polynomial in `nvars` variables stored as a list of monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self, DiffeoError> {
        for (_, exps) in &terms {
            if exps.len() != nvars {
                return Err(DiffeoError::DomainMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
        }
        Ok(Self { nvars, terms })
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self {
            nvars,
            terms: vec![(c, vec![0; nvars])],
        }
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self {
            nvars,
            terms: vec![(1.0, exps)],
        }
    }

    /// Univariate polynomial `Σ_k coeffs[k] t^k`.
    pub fn univariate(coeffs: &[f64]) -> Self {
        Self {
            nvars: 1,
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(k, &c)| (c, vec![k as u32]))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                exps.iter()
                    .zip(x)
                    .fold(*c, |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum()
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, exps)| exps[var] > 0)
            .map(|(c, exps)| {
                let mut e = exps.clone();
                let k = e[var];
                e[var] -= 1;
                (c * f64::from(k), e)
            })
            .collect();
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    /// Re-embeds the polynomial into `total` variables starting at `offset`.
    pub fn lift(&self, total: usize, offset: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, exps)| {
                let mut e = vec![0; total];
                e[offset..offset + self.nvars].copy_from_slice(exps);
                (*c, e)
            })
            .collect();
        Self { nvars: total, terms }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(c, e)| (a * c, e.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    /// Coefficients of `s ↦ p(x + s v)` as a univariate polynomial in `s`.
    fn restrict_to_line(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0];
        for (c, exps) in &self.terms {
            let mut acc = vec![*c];
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    // multiply by (x_i + s v_i)
                    let mut next = vec![0.0; acc.len() + 1];
                    for (k, a) in acc.iter().enumerate() {
                        next[k] += a * x[i];
                        next[k + 1] += a * v[i];
                    }
                    acc = next;
                }
            }
            if acc.len() > out.len() {
                out.resize(acc.len(), 0.0);
            }
            for (k, a) in acc.into_iter().enumerate() {
                out[k] += a;
            }
        }
        out
    }
}

type MapFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

#[derive(Clone)]
enum Repr {
    Polynomial(Arc<[Polynomial]>),
    Function(Arc<MapFn>),
}

/// A smooth map `ℝ^domain_dim ⊃ box → ℝ^codomain_dim`.
///
/// The box is only used for sampling-based checks (plot validation); the map
/// itself may be evaluated anywhere.
#[derive(Clone)]
pub struct SmoothMap {
    domain_dim: usize,
    codomain_dim: usize,
    deriv_order: u32,
    domain: Vec<(f64, f64)>,
    repr: Repr,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothMap")
            .field("domain_dim", &self.domain_dim)
            .field("codomain_dim", &self.codomain_dim)
            .field("polynomial", &self.is_polynomial())
            .finish()
    }
}

impl SmoothMap {
    /// Wraps a closure. Derivatives are taken by central differences.
    pub fn from_fn<F>(domain_dim: usize, codomain_dim: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(domain_dim > 0 && codomain_dim > 0, "dimensions must be positive");
        Self {
            domain_dim,
            codomain_dim,
            deriv_order: 2,
            domain: vec![(-1.0, 1.0); domain_dim],
            repr: Repr::Function(Arc::new(f)),
        }
    }

    pub fn polynomial(components: Vec<Polynomial>) -> Result<Self, DiffeoError> {
        let first = components.first().ok_or(DiffeoError::EmptyMap)?;
        let n = first.nvars();
        if n == 0 {
            return Err(DiffeoError::EmptyMap);
        }
        if let Some(bad) = components.iter().find(|p| p.nvars() != n) {
            return Err(DiffeoError::DomainMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(Self {
            domain_dim: n,
            codomain_dim: components.len(),
            deriv_order: u32::MAX,
            domain: vec![(-1.0, 1.0); n],
            repr: Repr::Polynomial(components.into()),
        })
    }

    /// Scalar polynomial function.
    pub fn scalar(p: Polynomial) -> Self {
        Self::polynomial(vec![p]).expect("polynomial with at least one variable")
    }

    /// Polynomial path `t ↦ (p_1(t), …, p_n(t))` from per-component coefficients.
    pub fn polynomial_path(components: &[Vec<f64>]) -> Result<Self, DiffeoError> {
        Self::polynomial(components.iter().map(|c| Polynomial::univariate(c)).collect())
    }

    /// Sets the sampling box of the domain.
    pub fn with_domain(mut self, domain: Vec<(f64, f64)>) -> Self {
        assert_eq!(domain.len(), self.domain_dim);
        self.domain = domain;
        self
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn deriv_order(&self) -> u32 {
        self.deriv_order
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.repr, Repr::Polynomial(_))
    }

    pub fn polynomials(&self) -> Option<&[Polynomial]> {
        match &self.repr {
            Repr::Polynomial(p) => Some(p),
            Repr::Function(_) => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.domain_dim);
        match &self.repr {
            Repr::Polynomial(ps) => ps.iter().map(|p| p.eval(x)).collect(),
            Repr::Function(f) => f(x),
        }
    }

    /// First component; convenient for scalar functions.
    pub fn eval_scalar(&self, x: &[f64]) -> f64 {
        self.eval(x)[0]
    }

    /// `d^order/ds^order self(x + s v)` at `s = 0`.
    ///
    /// Exact for polynomial maps; central differences with step [`FD_STEP`]
    /// (orders 1 and 2 only) otherwise.
    pub fn directional_derivative(
        &self,
        x: &[f64],
        v: &[f64],
        order: u32,
    ) -> Result<Vec<f64>, DiffeoError> {
        if x.len() != self.domain_dim || v.len() != self.domain_dim {
            return Err(DiffeoError::DomainMismatch {
                expected: self.domain_dim,
                found: x.len().min(v.len()),
            });
        }
        match &self.repr {
            Repr::Polynomial(ps) => {
                let fact: f64 = (1..=order).map(f64::from).product();
                Ok(ps
                    .iter()
                    .map(|p| {
                        let c = p.restrict_to_line(x, v);
                        c.get(order as usize).copied().unwrap_or(0.0) * fact
                    })
                    .collect())
            }
            Repr::Function(_) => {
                let shifted = |s: f64| {
                    let y: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + s * b).collect();
                    self.eval(&y)
                };
                let h = FD_STEP;
                match order {
                    0 => Ok(self.eval(x)),
                    1 => {
                        let (p, m) = (shifted(h), shifted(-h));
                        Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect())
                    }
                    2 => {
                        let (p, m, c) = (shifted(h), shifted(-h), self.eval(x));
                        Ok(p.iter()
                            .zip(&m)
                            .zip(&c)
                            .map(|((a, b), c)| (a - 2.0 * c + b) / (h * h))
                            .collect())
                    }
                    _ => Err(DiffeoError::OrderUnsupported(order)),
                }
            }
        }
    }

    /// Views `self` as a map on `ℝ^total` reading coordinates
    /// `offset..offset + domain_dim`.
    pub fn lift(&self, total: usize, offset: usize) -> Self {
        let repr = match &self.repr {
            Repr::Polynomial(ps) => {
                Repr::Polynomial(ps.iter().map(|p| p.lift(total, offset)).collect())
            }
            Repr::Function(f) => {
                let f = Arc::clone(f);
                let n = self.domain_dim;
                Repr::Function(Arc::new(move |x: &[f64]| f(&x[offset..offset + n])))
            }
        };
        let mut domain = vec![(-1.0, 1.0); total];
        domain[offset..offset + self.domain_dim].copy_from_slice(&self.domain);
        Self {
            domain_dim: total,
            codomain_dim: self.codomain_dim,
            deriv_order: self.deriv_order,
            domain,
            repr,
        }
    }

    /// Cartesian product `(u, v) ↦ (self(u), other(v))`.
    pub fn product(&self, other: &Self) -> Self {
        let total = self.domain_dim + other.domain_dim;
        let a = self.lift(total, 0);
        let b = other.lift(total, self.domain_dim);
        let mut domain = self.domain.clone();
        domain.extend_from_slice(&other.domain);
        let repr = match (&a.repr, &b.repr) {
            (Repr::Polynomial(pa), Repr::Polynomial(pb)) => {
                Repr::Polynomial(pa.iter().chain(pb.iter()).cloned().collect())
            }
            _ => Repr::Function(Arc::new(move |x: &[f64]| {
                let mut out = a.eval(x);
                out.extend(b.eval(x));
                out
            })),
        };
        Self {
            domain_dim: total,
            codomain_dim: self.codomain_dim + other.codomain_dim,
            deriv_order: self.deriv_order.min(other.deriv_order),
            domain,
            repr,
        }
    }

    /// Composite `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, DiffeoError> {
        if inner.codomain_dim != self.domain_dim {
            return Err(DiffeoError::DomainMismatch {
                expected: self.domain_dim,
                found: inner.codomain_dim,
            });
        }
        let (outer, inner_c) = (self.clone(), inner.clone());
        Ok(Self {
            domain_dim: inner.domain_dim,
            codomain_dim: self.codomain_dim,
            deriv_order: self.deriv_order.min(inner.deriv_order),
            domain: inner.domain.clone(),
            repr: Repr::Function(Arc::new(move |x: &[f64]| outer.eval(&inner_c.eval(x)))),
        })
    }
}

/// Regular grid with `per_axis` samples on each axis of `domain`.
pub(crate) fn grid_points(domain: &[(f64, f64)], per_axis: usize) -> Vec<Vec<f64>> {
    let mut pts = vec![Vec::new()];
    for &(lo, hi) in domain {
        let mut next = Vec::with_capacity(pts.len() * per_axis);
        for p in &pts {
            for k in 0..per_axis {
                let s = if per_axis == 1 {
                    0.5
                } else {
                    k as f64 / (per_axis - 1) as f64
                };
                let mut q = p.clone();
                q.push(lo + s * (hi - lo));
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}
