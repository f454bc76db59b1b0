use super::curve::{check_len, signed_area, DiscreteCurve, Point, TangentField};
use super::ShapeError;

/// Perturbation used by [`shape_differential`].
pub const DIFFERENTIAL_STEP: f64 = 1e-6;

/// Objective functions on closed curves, all invariant under cyclic
/// relabeling of the nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeFunctional {
    /// Perimeter.
    Length,
    /// Absolute shoelace area.
    EnclosedArea,
    /// Half the squared discrete L² distance to `target`, weighted by the
    /// target's node arclengths and minimized over cyclic label shifts.
    TargetMatch { target: DiscreteCurve, weights: Vec<f64> },
}

impl ShapeFunctional {
    pub fn target_match(target: DiscreteCurve) -> Self {
        let weights = target.dual_lengths();
        Self::TargetMatch { target, weights }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Length => "length",
            Self::EnclosedArea => "enclosed_area",
            Self::TargetMatch { .. } => "target_match",
        }
    }

    pub fn eval(&self, c: &DiscreteCurve) -> f64 {
        self.eval_nodes(c.nodes())
    }

    /// Evaluates on raw node positions (used for perturbed, unvalidated curves).
    pub fn eval_nodes(&self, nodes: &[Point]) -> f64 {
        let n = nodes.len();
        match self {
            Self::Length => (0..n)
                .map(|i| {
                    let (p, q) = (nodes[i], nodes[(i + 1) % n]);
                    (q[0] - p[0]).hypot(q[1] - p[1])
                })
                .sum(),
            Self::EnclosedArea => signed_area(nodes).abs(),
            Self::TargetMatch { target, weights } => {
                if n != target.len() {
                    return f64::NAN;
                }
                best_shift(nodes, target.nodes(), weights).1
            }
        }
    }

    /// Analytic differential (covector, one row per node).
    pub fn analytic_differential(&self, c: &DiscreteCurve) -> Result<TangentField, ShapeError> {
        let nodes = c.nodes();
        let n = nodes.len();
        let value = self.eval(c);
        if !value.is_finite() {
            return Err(ShapeError::NonFiniteObjective);
        }
        let out = match self {
            Self::Length => {
                let e = c.edge_lengths();
                (0..n)
                    .map(|i| {
                        let prev = (i + n - 1) % n;
                        let next = (i + 1) % n;
                        let (p, x, q) = (nodes[prev], nodes[i], nodes[next]);
                        [
                            (x[0] - p[0]) / e[prev] - (q[0] - x[0]) / e[i],
                            (x[1] - p[1]) / e[prev] - (q[1] - x[1]) / e[i],
                        ]
                    })
                    .collect()
            }
            Self::EnclosedArea => {
                let sign = c.signed_area().signum();
                (0..n)
                    .map(|i| {
                        let (p, q) = (nodes[(i + n - 1) % n], nodes[(i + 1) % n]);
                        [0.5 * sign * (q[1] - p[1]), 0.5 * sign * (p[0] - q[0])]
                    })
                    .collect()
            }
            Self::TargetMatch { target, weights } => {
                check_len(target.len(), n)?;
                let (m, _) = best_shift(nodes, target.nodes(), weights);
                let mut out = vec![[0.0; 2]; n];
                for (i, (t, w)) in target.nodes().iter().zip(weights).enumerate() {
                    let j = (i + m) % n;
                    out[j] = [w * (nodes[j][0] - t[0]), w * (nodes[j][1] - t[1])];
                }
                out
            }
        };
        Ok(TangentField::new(out))
    }
}

/// Shift `m` minimizing `½ Σ_i w_i |c_{i+m} - t_i|²`, and the minimum.
fn best_shift(nodes: &[Point], target: &[Point], weights: &[f64]) -> (usize, f64) {
    let n = nodes.len();
    let mut best = (0, f64::INFINITY);
    for m in 0..n {
        let v = 0.5
            * target
                .iter()
                .zip(weights)
                .enumerate()
                .map(|(i, (t, w))| {
                    let p = nodes[(i + m) % n];
                    let (dx, dy) = (p[0] - t[0], p[1] - t[1]);
                    w * (dx * dx + dy * dy)
                })
                .sum::<f64>();
        if v < best.1 {
            best = (m, v);
        }
    }
    best
}

/// Gateaux differential of `j` at `c` by central differences: component
/// `(i, axis)` perturbs node `i` along `axis` by [`DIFFERENTIAL_STEP`].
pub fn shape_differential(
    j: &ShapeFunctional,
    c: &DiscreteCurve,
) -> Result<TangentField, ShapeError> {
    if !j.eval(c).is_finite() {
        return Err(ShapeError::NonFiniteObjective);
    }
    let h = DIFFERENTIAL_STEP;
    let mut nodes = c.nodes().to_vec();
    let mut out = vec![[0.0; 2]; nodes.len()];
    for i in 0..nodes.len() {
        for axis in 0..2 {
            let orig = nodes[i][axis];
            nodes[i][axis] = orig + h;
            let plus = j.eval_nodes(&nodes);
            nodes[i][axis] = orig - h;
            let minus = j.eval_nodes(&nodes);
            nodes[i][axis] = orig;
            let d = (plus - minus) / (2.0 * h);
            if !d.is_finite() {
                return Err(ShapeError::NonFiniteObjective);
            }
            out[i][axis] = d;
        }
    }
    Ok(TangentField::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel_err(a: &TangentField, b: &TangentField) -> f64 {
        let diff: f64 = a
            .flat()
            .iter()
            .zip(b.flat())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        diff / b.flat().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn length_differential_is_bisector() {
        let c = DiscreteCurve::circle(1.0, 12).unwrap();
        let j = ShapeFunctional::Length;
        let exact = j.analytic_differential(&c).unwrap();
        let fd = shape_differential(&j, &c).unwrap();
        assert!(exact
            .flat()
            .iter()
            .zip(fd.flat())
            .all(|(a, b)| (a - b).abs() <= 1e-6));
        // regular polygon: gradient of node i points radially outward
        for (g, p) in exact.values().iter().zip(c.nodes()) {
            let cross = g[0] * p[1] - g[1] * p[0];
            assert!(cross.abs() < 1e-12);
            assert!(g[0] * p[0] + g[1] * p[1] > 0.0);
        }
    }

    #[test]
    fn area_differential_tracks_normals() {
        let c = DiscreteCurve::circle(1.0, 128).unwrap();
        let j = ShapeFunctional::EnclosedArea;
        let exact = j.analytic_differential(&c).unwrap();
        assert!(rel_err(&shape_differential(&j, &c).unwrap(), &exact) < 1e-5);
        let normals = TangentField::new(c.outward_normals());
        let total = exact.dot(&normals);
        assert!((total - c.perimeter()).abs() / c.perimeter() < 1e-3);
        assert!((total - 2.0 * PI).abs() < 1e-2);
    }

    #[test]
    fn area_differential_on_clockwise_curve() {
        let ccw = DiscreteCurve::ellipse(1.5, 0.5, 20).unwrap();
        let cw = DiscreteCurve::new(ccw.nodes().iter().rev().copied().collect()).unwrap();
        let j = ShapeFunctional::EnclosedArea;
        assert_eq!(j.eval(&cw), j.eval(&ccw));
        assert!(rel_err(
            &shape_differential(&j, &cw).unwrap(),
            &j.analytic_differential(&cw).unwrap()
        ) < 1e-5);
    }

    #[test]
    fn target_match_vanishes_at_target() {
        let c = DiscreteCurve::ellipse(2.0, 1.0, 32).unwrap();
        let j = ShapeFunctional::target_match(c.clone());
        assert_eq!(j.eval(&c), 0.0);
        assert!(shape_differential(&j, &c).unwrap().max_abs() < 1e-12);
        assert_eq!(j.analytic_differential(&c).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn target_match_analytic_agrees_with_fd() {
        let target = DiscreteCurve::circle(1.0, 24).unwrap();
        let c = DiscreteCurve::ellipse(1.7, 0.8, 24).unwrap().rotate_labels(5);
        let j = ShapeFunctional::target_match(target);
        let exact = j.analytic_differential(&c).unwrap();
        assert!(rel_err(&shape_differential(&j, &c).unwrap(), &exact) < 1e-6);
    }

    #[test]
    fn cyclic_invariance() {
        let target = DiscreteCurve::circle(1.0, 16).unwrap();
        let c = DiscreteCurve::ellipse(1.3, 0.9, 16).unwrap();
        for j in [
            ShapeFunctional::Length,
            ShapeFunctional::EnclosedArea,
            ShapeFunctional::target_match(target),
        ] {
            let base = j.eval(&c);
            for m in 0..16 {
                assert!((j.eval(&c.rotate_labels(m)) - base).abs() <= 1e-10);
            }
        }
    }
}
