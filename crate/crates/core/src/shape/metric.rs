//! Riemannian metrics on the discrete shape space.
//!
//! Fields are paired either through a dense `2N × 2N` Gram matrix in the
//! interleaved coordinate order `x0, y0, x1, y1, …` or through Fourier weights
//! applied to each coordinate separately.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::curve::{check_len, DiscreteCurve, TangentField, MIN_EDGE};
use super::ShapeError;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum GramKind {
    Dense {
        matrix: DMatrix<f64>,
        cholesky: Cholesky<f64, Dyn>,
    },
    /// Weights indexed by FFT bin (`k` for bins up to `N/2`, `k - N` above).
    Spectral { weights: Vec<f64> },
}

/// A symmetric positive-definite pairing of tangent fields at `base`.
#[derive(Debug, Clone)]
pub struct GramOperator {
    kind: GramKind,
    base: DiscreteCurve,
}

impl GramOperator {
    /// Dense operator from an explicit `2N × 2N` matrix.
    pub fn dense(base: &DiscreteCurve, matrix: DMatrix<f64>) -> Result<Self, ShapeError> {
        let dim = 2 * base.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(ShapeError::LengthMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let scale = matrix.amax().max(1.0);
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(ShapeError::AsymmetricMetric(i, j));
                }
            }
        }
        let cholesky = Cholesky::new(matrix.clone()).ok_or(ShapeError::SingularMetric)?;
        Ok(Self {
            kind: GramKind::Dense { matrix, cholesky },
            base: base.clone(),
        })
    }

    /// Euclidean pairing of nodal values.
    pub fn identity(base: &DiscreteCurve) -> Self {
        Self::dense(base, DMatrix::identity(2 * base.len(), 2 * base.len()))
            .expect("identity is positive definite")
    }

    pub fn kind(&self) -> &GramKind {
        &self.kind
    }

    pub fn base(&self) -> &DiscreteCurve {
        &self.base
    }

    /// Number of nodes of the base curve.
    pub fn nodes(&self) -> usize {
        self.base.len()
    }

    pub fn spectral_weights(&self) -> Option<&[f64]> {
        match &self.kind {
            GramKind::Spectral { weights } => Some(weights),
            GramKind::Dense { .. } => None,
        }
    }

    pub fn dense_matrix(&self) -> Option<&DMatrix<f64>> {
        match &self.kind {
            GramKind::Dense { matrix, .. } => Some(matrix),
            GramKind::Spectral { .. } => None,
        }
    }

    /// `g(h, k)`. The dense form is evaluated symmetrically so that
    /// `inner(h, k)` and `inner(k, h)` agree bit for bit.
    pub fn inner(&self, h: &TangentField, k: &TangentField) -> Result<f64, ShapeError> {
        check_len(self.nodes(), h.len())?;
        check_len(self.nodes(), k.len())?;
        match &self.kind {
            GramKind::Dense { matrix, .. } => {
                let (hf, kf) = (h.flat(), k.flat());
                let dim = hf.len();
                let mut acc = 0.0;
                for i in 0..dim {
                    acc += matrix[(i, i)] * (hf[i] * kf[i]);
                    for j in (i + 1)..dim {
                        let m = matrix[(i, j)];
                        if m != 0.0 {
                            acc += m * (hf[i] * kf[j] + hf[j] * kf[i]);
                        }
                    }
                }
                Ok(acc)
            }
            GramKind::Spectral { weights } => {
                let n = self.nodes();
                let (hh, kh) = (spectrum(h), spectrum(k));
                let mut acc = 0.0;
                for axis in 0..2 {
                    for (b, w) in weights.iter().enumerate() {
                        let (p, q) = (hh[axis][b], kh[axis][b]);
                        acc += w * (p.re * q.re + p.im * q.im);
                    }
                }
                Ok(acc / n as f64)
            }
        }
    }

    pub fn norm_sq(&self, h: &TangentField) -> Result<f64, ShapeError> {
        self.inner(h, h)
    }

    /// Riesz representative: the field `v` with `g(v, w) = ⟨df, w⟩` for all `w`.
    pub fn solve(&self, df: &TangentField) -> Result<TangentField, ShapeError> {
        check_len(self.nodes(), df.len())?;
        match &self.kind {
            GramKind::Dense { cholesky, .. } => {
                let x = cholesky.solve(&DVector::from_vec(df.flat()));
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(ShapeError::SingularMetric);
                }
                Ok(TangentField::from_flat(x.as_slice()))
            }
            GramKind::Spectral { weights } => {
                let mut spec = spectrum(df);
                for axis in spec.iter_mut() {
                    for (c, w) in axis.iter_mut().zip(weights) {
                        *c /= *w;
                    }
                }
                Ok(from_spectrum(spec))
            }
        }
    }
}

/// Unnormalized forward DFT of each coordinate of `h`.
pub fn spectrum(h: &TangentField) -> [Vec<Complex64>; 2] {
    let n = h.len();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut out = [Vec::new(), Vec::new()];
    for (axis, slot) in out.iter_mut().enumerate() {
        let mut buf: Vec<Complex64> = h
            .values()
            .iter()
            .map(|v| Complex64::new(v[axis], 0.0))
            .collect();
        fft.process(&mut buf);
        *slot = buf;
    }
    out
}

/// Inverse of [`spectrum`], keeping real parts.
pub fn from_spectrum(spec: [Vec<Complex64>; 2]) -> TangentField {
    let n = spec[0].len();
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n);
    let mut values = vec![[0.0; 2]; n];
    for (axis, mut buf) in spec.into_iter().enumerate() {
        ifft.process(&mut buf);
        for (v, c) in values.iter_mut().zip(&buf) {
            v[axis] = c.re / n as f64;
        }
    }
    TangentField::new(values)
}

/// Signed frequency of FFT bin `bin` for an `n`-point transform.
pub fn mode_of_bin(bin: usize, n: usize) -> i64 {
    if bin <= n / 2 {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

/// Sobolev H¹ metric `Σ ℓ_i a0 h_i·k_i + Σ_e |e| a1 Dh_e·Dk_e`, where `ℓ_i`
/// are the node arclength weights and `D` the forward difference along each
/// edge divided by its length.
pub fn h1_gram(c: &DiscreteCurve, a0: f64, a1: f64) -> Result<GramOperator, ShapeError> {
    if !(a0 > 0.0) || !(a1 >= 0.0) {
        return Err(ShapeError::InvalidParameter(format!(
            "h1 metric needs a0 > 0 and a1 >= 0, got a0={a0}, a1={a1}"
        )));
    }
    let n = c.len();
    let edges = c.edge_lengths();
    if let Some((edge, &length)) = edges.iter().enumerate().find(|(_, l)| !(**l > MIN_EDGE)) {
        return Err(ShapeError::DegenerateCurve { edge, length });
    }
    let mut k = DMatrix::<f64>::zeros(n, n);
    for (i, l) in c.dual_lengths().into_iter().enumerate() {
        k[(i, i)] += a0 * l;
    }
    if a1 > 0.0 {
        for (i, l) in edges.iter().enumerate() {
            let j = (i + 1) % n;
            let s = a1 / l;
            k[(i, i)] += s;
            k[(j, j)] += s;
            k[(i, j)] -= s;
            k[(j, i)] -= s;
        }
    }
    let mut g = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = k[(i, j)];
            g[(2 * i, 2 * j)] = v;
            g[(2 * i + 1, 2 * j + 1)] = v;
        }
    }
    GramOperator::dense(c, g)
}

/// Spectral H^s metric with Fourier weights `(1 + k²)^s`.
pub fn spectral_hs_gram(c: &DiscreteCurve, s: f64) -> Result<GramOperator, ShapeError> {
    if !(0.0..=2.0).contains(&s) {
        return Err(ShapeError::InvalidParameter(format!(
            "spectral order s must lie in [0, 2], got {s}"
        )));
    }
    let n = c.len();
    let weights = (0..n)
        .map(|b| {
            let k = mode_of_bin(b, n) as f64;
            (1.0 + k * k).powf(s)
        })
        .collect();
    Ok(GramOperator {
        kind: GramKind::Spectral { weights },
        base: c.clone(),
    })
}

/// Diffeological gradient: solves `g(v, ·) = df`.
pub fn gradient_solve(g: &GramOperator, df: &TangentField) -> Result<TangentField, ShapeError> {
    g.solve(df)
}

/// Metric choice, re-assembled at each base curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricSpec {
    /// Weighted L², the H¹ metric without its derivative term.
    L2 { a0: f64 },
    H1 { a0: f64, a1: f64 },
    Hs { s: f64 },
}

impl MetricSpec {
    pub fn assemble(&self, c: &DiscreteCurve) -> Result<GramOperator, ShapeError> {
        match *self {
            MetricSpec::L2 { a0 } => h1_gram(c, a0, 0.0),
            MetricSpec::H1 { a0, a1 } => h1_gram(c, a0, a1),
            MetricSpec::Hs { s } => spectral_hs_gram(c, s),
        }
    }
}

/// Length of a discrete path of curves,
/// `Σ_j sqrt(½ (g_{c_j} + g_{c_{j+1}})(Δ_j, Δ_j))` with `Δ_j = c_{j+1} - c_j`.
///
/// Averaging the metric over both ends of each step makes the value exactly
/// invariant under reversing the path.
pub fn arc_length(path: &[DiscreteCurve], metric: &MetricSpec) -> Result<f64, ShapeError> {
    if path.len() < 2 {
        return Err(ShapeError::InvalidParameter(
            "a path needs at least two curves".into(),
        ));
    }
    let n = path[0].len();
    let grams = path
        .iter()
        .map(|c| {
            check_len(n, c.len())?;
            metric.assemble(c)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut pieces = Vec::with_capacity(path.len() - 1);
    for (j, pair) in path.windows(2).enumerate() {
        let delta = TangentField::between(&pair[0], &pair[1])?;
        let q = 0.5 * (grams[j].norm_sq(&delta)? + grams[j + 1].norm_sq(&delta)?);
        pieces.push(q.max(0.0).sqrt());
    }
    // summing in sorted order makes the result independent of direction
    pieces.sort_by(f64::total_cmp);
    Ok(pieces.iter().sum())
}

/// Straight-line interpolation `(1 - t) a + t b` sampled at `m` curves.
pub fn linear_path(
    a: &DiscreteCurve,
    b: &DiscreteCurve,
    m: usize,
) -> Result<Vec<DiscreteCurve>, ShapeError> {
    check_len(a.len(), b.len())?;
    if m < 2 {
        return Err(ShapeError::InvalidParameter(
            "a path needs at least two curves".into(),
        ));
    }
    (0..m)
        .map(|j| {
            let t = j as f64 / (m - 1) as f64;
            DiscreteCurve::new(
                a.nodes()
                    .iter()
                    .zip(b.nodes())
                    .map(|(p, q)| [(1.0 - t) * p[0] + t * q[0], (1.0 - t) * p[1] + t * q[1]])
                    .collect(),
            )
        })
        .collect()
}

/// Pseudo-distance between `a` and `b` estimated as the infimum of metric
/// lengths over the given piecewise-linear candidate paths.
///
/// Each candidate is a list of intermediate waypoints; the empty list is the
/// straight segment. Every leg is sampled with `steps + 1` curves.
pub fn pseudo_distance(
    a: &DiscreteCurve,
    b: &DiscreteCurve,
    metric: &MetricSpec,
    steps: usize,
    candidates: &[Vec<DiscreteCurve>],
) -> Result<f64, ShapeError> {
    let straight = [Vec::new()];
    let candidates = if candidates.is_empty() {
        &straight[..]
    } else {
        candidates
    };
    let mut best = f64::INFINITY;
    for waypoints in candidates {
        let mut stops = vec![a];
        stops.extend(waypoints.iter());
        stops.push(b);
        let mut len = 0.0;
        for leg in stops.windows(2) {
            len += arc_length(&linear_path(leg[0], leg[1], steps + 1)?, metric)?;
        }
        best = best.min(len);
    }
    Ok(best)
}
