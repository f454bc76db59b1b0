//! Primitive of a flat connection on a rectangle: `f` with `df f⁻¹ = α`,
//! `f(x0, y0) = I`.

use super::connection::{curvature, ConnectionForm};
use super::expm::{inverse, Mat};
use super::group::{MatrixGroupSpec, Side};
use super::integrate::magnus_factor;
use super::LieError;

/// Largest curvature residual accepted as flat.
pub const FLATNESS_TOL: f64 = 1e-6;
/// Magnus steps per grid edge.
const SUBSTEPS: usize = 4;
/// Curvature probes per axis for the flatness precondition.
const FLATNESS_PROBES: usize = 9;
/// Step of the finite differences that check `df f⁻¹ = α`.
const RECOVERY_STEP: f64 = 1e-4;

/// Grid samples of a primitive together with its self-checks.
#[derive(Debug, Clone)]
pub struct FlatPrimitive {
    alpha: ConnectionForm,
    rect: [f64; 4],
    n: usize,
    values: Vec<Mat>,
    curvature_residual: f64,
    path_independence_residual: f64,
    recovery_residual: f64,
}

fn transfer(alpha: &ConnectionForm, from: [f64; 2], to: [f64; 2], substeps: usize) -> Mat {
    let d = alpha.dim();
    let dir = [to[0] - from[0], to[1] - from[1]];
    let v = |s: f64| alpha.eval(&[from[0] + s * dir[0], from[1] + s * dir[1]], &dir);
    let h = 1.0 / substeps as f64;
    let mut e = Mat::identity(d, d);
    for j in 0..substeps {
        e = magnus_factor(&v, j as f64 * h, h, Side::Right) * e;
    }
    e
}

impl FlatPrimitive {
    pub fn grid_size(&self) -> usize {
        self.n
    }

    /// Rectangle `[x0, x1, y0, y1]`.
    pub fn rect(&self) -> [f64; 4] {
        self.rect
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        let [x0, x1, y0, y1] = self.rect;
        let n = self.n as f64;
        [
            x0 + (x1 - x0) * i as f64 / n,
            y0 + (y1 - y0) * j as f64 / n,
        ]
    }

    /// Value at node `(i, j)`, `0 ≤ i, j ≤ n`.
    pub fn value(&self, i: usize, j: usize) -> &Mat {
        &self.values[j * (self.n + 1) + i]
    }

    /// `f(x, y)`, integrated from the nearest grid node along `x` then `y`.
    pub fn eval(&self, x: f64, y: f64) -> Mat {
        let [x0, x1, y0, y1] = self.rect;
        let n = self.n as f64;
        let i = (((x - x0) / (x1 - x0) * n).round().max(0.0) as usize).min(self.n);
        let j = (((y - y0) / (y1 - y0) * n).round().max(0.0) as usize).min(self.n);
        let p = self.node(i, j);
        let ex = transfer(&self.alpha, p, [x, p[1]], 1);
        let ey = transfer(&self.alpha, [x, p[1]], [x, y], 1);
        ey * ex * self.value(i, j)
    }

    pub fn curvature_residual(&self) -> f64 {
        self.curvature_residual
    }

    /// Largest disagreement between the two edge orders around a cell.
    pub fn path_independence_residual(&self) -> f64 {
        self.path_independence_residual
    }

    /// Largest `|∂_k f f⁻¹ - α(e_k)|` over grid nodes, by central differences.
    pub fn recovery_residual(&self) -> f64 {
        self.recovery_residual
    }

    fn compute_recovery(&self) -> Result<f64, LieError> {
        let h = RECOVERY_STEP;
        let mut worst: f64 = 0.0;
        for j in 0..=self.n {
            for i in 0..=self.n {
                let [x, y] = self.node(i, j);
                let fi = inverse(self.value(i, j))?;
                let dx = (self.eval(x + h, y) - self.eval(x - h, y)) / (2.0 * h) * &fi;
                let dy = (self.eval(x, y + h) - self.eval(x, y - h)) / (2.0 * h) * &fi;
                worst = worst
                    .max((dx - self.alpha.eval(&[x, y], &[1.0, 0.0])).amax())
                    .max((dy - self.alpha.eval(&[x, y], &[0.0, 1.0])).amax());
            }
        }
        Ok(worst)
    }
}

/// Integrates `df f⁻¹ = α` on an `n × n` grid over `rect = [x0, x1, y0, y1]`,
/// first up the column `x = x0` and then along each row.
pub fn solve_flat_primitive(
    alpha: &ConnectionForm,
    rect: [f64; 4],
    spec: &MatrixGroupSpec,
    n: usize,
) -> Result<FlatPrimitive, LieError> {
    let [x0, x1, y0, y1] = rect;
    if !(x1 > x0 && y1 > y0) || rect.iter().any(|v| !v.is_finite()) {
        return Err(LieError::InvalidDomain(format!("{rect:?}")));
    }
    if alpha.base_dim() != 2 {
        return Err(LieError::DimensionMismatch {
            expected: 2,
            found: alpha.base_dim(),
        });
    }
    if alpha.dim() != spec.dim() {
        return Err(LieError::DimensionMismatch {
            expected: spec.dim(),
            found: alpha.dim(),
        });
    }
    if n == 0 {
        return Err(LieError::InvalidSteps(n));
    }
    let mut curvature_residual: f64 = 0.0;
    for b in 0..FLATNESS_PROBES {
        for a in 0..FLATNESS_PROBES {
            let k = (FLATNESS_PROBES - 1) as f64;
            let x = x0 + (x1 - x0) * a as f64 / k;
            let y = y0 + (y1 - y0) * b as f64 / k;
            let om = curvature(alpha, &[x, y], &[1.0, 0.0], &[0.0, 1.0])?;
            curvature_residual = curvature_residual.max(om.amax());
        }
    }
    if !(curvature_residual <= FLATNESS_TOL) {
        return Err(LieError::NotFlat {
            residual: curvature_residual,
        });
    }

    let d = spec.dim();
    let stride = n + 1;
    let mut prim = FlatPrimitive {
        alpha: alpha.clone(),
        rect,
        n,
        values: vec![Mat::identity(d, d); stride * stride],
        curvature_residual,
        path_independence_residual: 0.0,
        recovery_residual: 0.0,
    };
    // transfers along x-edges (i, j) → (i+1, j) and y-edges (i, j) → (i, j+1)
    let mut ex = Vec::with_capacity(n * stride);
    let mut ey = Vec::with_capacity(n * stride);
    for j in 0..=n {
        for i in 0..n {
            ex.push(transfer(alpha, prim.node(i, j), prim.node(i + 1, j), SUBSTEPS));
        }
    }
    for j in 0..n {
        for i in 0..=n {
            ey.push(transfer(alpha, prim.node(i, j), prim.node(i, j + 1), SUBSTEPS));
        }
    }
    let ex_at = |i: usize, j: usize| &ex[j * n + i];
    let ey_at = |i: usize, j: usize| &ey[j * stride + i];

    for j in 1..=n {
        prim.values[j * stride] = ey_at(0, j - 1) * &prim.values[(j - 1) * stride];
    }
    for j in 0..=n {
        for i in 1..=n {
            prim.values[j * stride + i] = ex_at(i - 1, j) * &prim.values[j * stride + i - 1];
        }
    }
    let mut indep: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            let x_first = ey_at(i + 1, j) * ex_at(i, j);
            let y_first = ex_at(i, j + 1) * ey_at(i, j);
            indep = indep.max(((x_first - y_first) * prim.value(i, j)).amax());
        }
    }
    prim.path_independence_residual = indep;
    for (k, g) in prim.values.iter().enumerate() {
        let r = spec.membership_residual(g);
        if !(r <= super::group::MEMBERSHIP_TOL) {
            return Err(LieError::NotInGroup {
                t: k as f64,
                residual: r,
            });
        }
    }
    prim.recovery_residual = prim.compute_recovery()?;
    Ok(prim)
}
