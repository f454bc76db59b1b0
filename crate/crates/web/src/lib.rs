//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exposed: steepest descent of an ellipse onto a
//! circle, holonomy around a small square, and midpoint refinement of the
//! unit square. Everything returns flat `f64` arrays so the page needs no
//! glue beyond `wasm-bindgen`.

use diffeo_core::descent::{steepest_descent, ArmijoParams, Retraction};
use diffeo_core::lie::{commutator, holonomy, logm, BasePath, ConnectionForm, ExpProduct, Mat, MatrixGroupSpec};
use diffeo_core::mesh::{refine_sequence, RefinementRule, Triangulation2D};
use diffeo_core::shape::{DiscreteCurve, MetricSpec, ShapeFunctional};
use diffeo_core::smooth::Polynomial;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// A finished descent run from an ellipse onto the unit circle.
#[wasm_bindgen]
pub struct CurveRun {
    iterates: Vec<Vec<f64>>,
    objectives: Vec<f64>,
    target: Vec<f64>,
    termination: String,
}

impl CurveRun {
    pub fn run(a: f64, b: f64, n: usize, metric: &str, s: f64, max_iters: usize) -> Result<CurveRun, String> {
        let start = DiscreteCurve::ellipse(a, b, n).map_err(err)?;
        let target = DiscreteCurve::circle(1.0, n).map_err(err)?;
        let metric = match metric {
            "l2" => MetricSpec::L2 { a0: 1.0 },
            "h1" => MetricSpec::H1 { a0: 1.0, a1: 1.0 },
            "hs" => MetricSpec::Hs { s },
            other => return Err(format!("unknown metric `{other}`")),
        };
        let p = ArmijoParams {
            max_iters: max_iters.max(1),
            ..ArmijoParams::default()
        };
        let j = ShapeFunctional::target_match(target.clone());
        let trace = steepest_descent(&j, &start, &metric, &Retraction::Shift, &p).map_err(err)?;
        Ok(CurveRun {
            iterates: trace.iterates.iter().map(DiscreteCurve::flat).collect(),
            objectives: trace.objectives.clone(),
            target: target.flat(),
            termination: trace.termination.to_string(),
        })
    }
}

#[wasm_bindgen]
impl CurveRun {
    /// `metric` is `"l2"`, `"h1"` or `"hs"`; `s` is used by `"hs"` only.
    #[wasm_bindgen(constructor)]
    pub fn new(a: f64, b: f64, n: usize, metric: &str, s: f64, max_iters: usize) -> Result<CurveRun, JsError> {
        Self::run(a, b, n, metric, s, max_iters).map_err(js)
    }

    /// Number of accepted steps.
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    /// Interleaved `x0, y0, x1, y1, …` of iterate `k` (clamped).
    pub fn iterate(&self, k: usize) -> Vec<f64> {
        self.iterates[k.min(self.iterates.len() - 1)].clone()
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.objectives.clone()
    }

    pub fn target(&self) -> Vec<f64> {
        self.target.clone()
    }

    pub fn termination(&self) -> String {
        self.termination.clone()
    }
}

fn generators() -> (Mat, Mat) {
    let a = Mat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let b = Mat::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
    (a, b)
}

/// Holonomy on SO(3) around the square `[x, x + side] × [y, y + side]`.
///
/// Returns `[curved, predicted, flat]`: the log-norm for the constant
/// connection `L_z dx + L_x dy`, the leading-order prediction
/// `side² ‖[L_z, L_x]‖`, and the log-norm for the flat connection pulled back
/// from `(x, y) ↦ exp(x L_z) exp(xy L_x)`.
#[wasm_bindgen]
pub fn square_holonomy(x: f64, y: f64, side: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    square_holonomy_values(x, y, side, steps).map_err(js)
}

pub fn square_holonomy_values(x: f64, y: f64, side: f64, steps: usize) -> Result<Vec<f64>, String> {
    if !(side > 0.0) {
        return Err("side must be positive".into());
    }
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let (a, b) = generators();
    let lp = BasePath::square([x, y], side);
    let curved = ConnectionForm::constant(vec![a.clone(), b.clone()]);
    let h = holonomy(&lp, &curved, &so3, steps).map_err(err)?;
    let curved_norm = logm(&h).map_err(err)?.norm();
    let predicted = side * side * commutator(&a, &b).norm();
    let flat = ExpProduct::new(vec![
        (Polynomial::coordinate(2, 0), a),
        (Polynomial::new(2, vec![(1.0, vec![1, 1])]).map_err(err)?, b),
    ])
    .map_err(err)?
    .maurer_cartan();
    let hf = holonomy(&lp, &flat, &so3, steps).map_err(err)?;
    let flat_norm = logm(&hf).map_err(err)?.norm();
    Ok(vec![curved_norm, predicted, flat_norm])
}

/// Midpoint refinement of the unit square.
#[wasm_bindgen]
pub struct MeshLevels {
    levels: Vec<Triangulation2D>,
}

impl MeshLevels {
    pub fn build(levels: usize) -> Result<MeshLevels, String> {
        let seq = refine_sequence(&Triangulation2D::unit_square(), &RefinementRule::midpoint4(), levels).map_err(err)?;
        Ok(MeshLevels { levels: seq })
    }
}

#[wasm_bindgen]
impl MeshLevels {
    #[wasm_bindgen(constructor)]
    pub fn new(levels: usize) -> Result<MeshLevels, JsError> {
        Self::build(levels).map_err(js)
    }

    pub fn count(&self) -> usize {
        self.levels.len()
    }

    /// Corners of every triangle at level `k`, six numbers per face.
    pub fn triangles(&self, k: usize) -> Vec<f64> {
        let t = &self.levels[k.min(self.levels.len() - 1)];
        (0..t.len())
            .flat_map(|f| t.corners(f).into_iter().flatten())
            .collect()
    }

    pub fn mesh_sizes(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|t| t.mesh_size().unwrap_or(f64::NAN))
            .collect()
    }
}
