//! Embedded diffeological spaces, path germs and tangent-cone probing.
//!
//! A space is a subset of ℝⁿ cut out by scalar constraints and generated by a
//! finite family of plots. Germs of paths through a point are compared through
//! their path derivatives against a finite family of test functions; with the
//! ambient coordinates as test functions this is the internal-external cone.

use std::sync::Arc;

use thiserror::Error;

use crate::smooth::{grid_points, Polynomial, SmoothMap};

/// Samples per axis when checking that a plot lands in the space.
pub const PLOT_SAMPLES_PER_AXIS: usize = 10;
/// Largest admissible constraint residual on sampled points.
pub const CONSTRAINT_TOL: f64 = 1e-9;
/// Step of the five-point stencil used by [`path_derivative`].
pub const PATH_FD_STEP: f64 = 1e-4;
/// Two germs are equivalent when all test derivatives agree to this tolerance.
pub const EQUIVALENCE_TOL: f64 = 1e-7;
const BASE_POINT_TOL: f64 = 1e-12;
const GERM_WINDOW: f64 = 0.1;
const GERM_SAMPLES: usize = 41;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffeoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("path germs are based at different points")]
    BasePointMismatch,
    #[error("path germs live on different spaces")]
    SpaceMismatch,
    #[error("generating plot {plot} leaves the space (constraint residual {residual:e})")]
    PlotOffSpace { plot: usize, residual: f64 },
    #[error("path leaves the space near its base point (constraint residual {residual:e})")]
    PathOffSpace { residual: f64 },
    #[error("path(0) differs from the base point by {distance:e}")]
    PathNotAtBase { distance: f64 },
    #[error("constraint {0} is not scalar")]
    NotScalar(usize),
    #[error("derivative order {0} is unavailable for non-polynomial maps")]
    OrderUnsupported(u32),
    #[error("map has no components")]
    EmptyMap,
}

/// A subset of ℝⁿ with the subset diffeology, generated by `generating_plots`.
#[derive(Debug, Clone)]
pub struct EmbeddedSpace {
    ambient_dim: usize,
    constraints: Vec<SmoothMap>,
    generating_plots: Vec<SmoothMap>,
    label: String,
}

impl EmbeddedSpace {
    pub fn new(
        label: impl Into<String>,
        ambient_dim: usize,
        constraints: Vec<SmoothMap>,
        generating_plots: Vec<SmoothMap>,
    ) -> Result<Self, DiffeoError> {
        for (i, c) in constraints.iter().enumerate() {
            if c.codomain_dim() != 1 {
                return Err(DiffeoError::NotScalar(i));
            }
            if c.domain_dim() != ambient_dim {
                return Err(DiffeoError::DomainMismatch {
                    expected: ambient_dim,
                    found: c.domain_dim(),
                });
            }
        }
        let space = Self {
            ambient_dim,
            constraints,
            generating_plots,
            label: label.into(),
        };
        for (i, plot) in space.generating_plots.iter().enumerate() {
            if plot.codomain_dim() != ambient_dim {
                return Err(DiffeoError::DomainMismatch {
                    expected: ambient_dim,
                    found: plot.codomain_dim(),
                });
            }
            let worst = grid_points(plot.domain(), PLOT_SAMPLES_PER_AXIS)
                .iter()
                .map(|u| space.constraint_residual(&plot.eval(u)))
                .fold(0.0, f64::max);
            if worst > CONSTRAINT_TOL {
                return Err(DiffeoError::PlotOffSpace {
                    plot: i,
                    residual: worst,
                });
            }
        }
        Ok(space)
    }

    /// ℝⁿ with the identity as its single generating plot.
    pub fn euclidean(n: usize) -> Self {
        let id = SmoothMap::polynomial((0..n).map(|i| Polynomial::coordinate(n, i)).collect())
            .expect("n > 0");
        Self::new(format!("R^{n}"), n, Vec::new(), vec![id]).expect("identity plot")
    }

    /// The coordinate cross `{xy = 0} ⊂ ℝ²`, generated by the two axes.
    pub fn cross() -> Self {
        let xy = SmoothMap::scalar(Polynomial::new(2, vec![(1.0, vec![1, 1])]).expect("2 vars"));
        let x_axis = SmoothMap::polynomial_path(&[vec![0.0, 1.0], vec![0.0]]).expect("path");
        let y_axis = SmoothMap::polynomial_path(&[vec![0.0], vec![0.0, 1.0]]).expect("path");
        Self::new("cross", 2, vec![xy], vec![x_axis, y_axis]).expect("axes lie on the cross")
    }

    /// The unit circle `{x² + y² = 1}` generated by the angle chart.
    pub fn circle() -> Self {
        let c = SmoothMap::scalar(
            Polynomial::new(
                2,
                vec![(1.0, vec![2, 0]), (1.0, vec![0, 2]), (-1.0, vec![0, 0])],
            )
            .expect("2 vars"),
        );
        let chart = SmoothMap::from_fn(1, 2, |t| vec![t[0].cos(), t[0].sin()])
            .with_domain(vec![(-std::f64::consts::PI, std::f64::consts::PI)]);
        Self::new("circle", 2, vec![c], vec![chart]).expect("chart lies on the circle")
    }

    /// The single point `{0} ⊂ ℝ¹`.
    pub fn origin_point() -> Self {
        let z = SmoothMap::scalar(Polynomial::coordinate(1, 0));
        let constant = SmoothMap::scalar(Polynomial::zero(1));
        Self::new("point", 1, vec![z], vec![constant]).expect("constant plot")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn constraints(&self) -> &[SmoothMap] {
        &self.constraints
    }

    pub fn generating_plots(&self) -> &[SmoothMap] {
        &self.generating_plots
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest absolute constraint value at `x`.
    pub fn constraint_residual(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.eval_scalar(x).abs())
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.ambient_dim && self.constraint_residual(x) <= CONSTRAINT_TOL
    }
}

/// Product space: constraints of both factors on their coordinate blocks,
/// generated by all pairwise products of generating plots.
pub fn make_product(a: &EmbeddedSpace, b: &EmbeddedSpace) -> EmbeddedSpace {
    let n = a.ambient_dim + b.ambient_dim;
    let constraints = a
        .constraints
        .iter()
        .map(|c| c.lift(n, 0))
        .chain(b.constraints.iter().map(|c| c.lift(n, a.ambient_dim)))
        .collect();
    let plots = a
        .generating_plots
        .iter()
        .flat_map(|p| b.generating_plots.iter().map(move |q| p.product(q)))
        .collect();
    EmbeddedSpace {
        ambient_dim: n,
        constraints,
        generating_plots: plots,
        label: format!("{} x {}", a.label, b.label),
    }
}

/// A smooth path through `base_point` on `space`.
#[derive(Debug, Clone)]
pub struct PathGerm {
    base_point: Vec<f64>,
    path: SmoothMap,
    space: Arc<EmbeddedSpace>,
}

impl PathGerm {
    pub fn new(
        space: Arc<EmbeddedSpace>,
        base_point: Vec<f64>,
        path: SmoothMap,
    ) -> Result<Self, DiffeoError> {
        let n = space.ambient_dim();
        if path.domain_dim() != 1 {
            return Err(DiffeoError::DomainMismatch {
                expected: 1,
                found: path.domain_dim(),
            });
        }
        if path.codomain_dim() != n || base_point.len() != n {
            return Err(DiffeoError::DomainMismatch {
                expected: n,
                found: path.codomain_dim(),
            });
        }
        let distance = path
            .eval(&[0.0])
            .iter()
            .zip(&base_point)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if distance > BASE_POINT_TOL {
            return Err(DiffeoError::PathNotAtBase { distance });
        }
        let residual = (0..GERM_SAMPLES)
            .map(|k| {
                let t = -GERM_WINDOW + 2.0 * GERM_WINDOW * k as f64 / (GERM_SAMPLES - 1) as f64;
                space.constraint_residual(&path.eval(&[t]))
            })
            .fold(0.0, f64::max);
        if residual > CONSTRAINT_TOL {
            return Err(DiffeoError::PathOffSpace { residual });
        }
        Ok(Self {
            base_point,
            path,
            space,
        })
    }

    pub fn base_point(&self) -> &[f64] {
        &self.base_point
    }

    pub fn path(&self) -> &SmoothMap {
        &self.path
    }

    pub fn space(&self) -> &Arc<EmbeddedSpace> {
        &self.space
    }

    /// Ambient velocity `c'(0)`, i.e. path derivatives of the coordinates.
    pub fn velocity(&self) -> Vec<f64> {
        coordinate_functions(self.space.ambient_dim())
            .iter()
            .map(|f| path_derivative(f, self).expect("coordinates match the ambient dimension"))
            .collect()
    }
}

/// The ambient coordinate functions `x_1, …, x_n`.
pub fn coordinate_functions(n: usize) -> Vec<SmoothMap> {
    (0..n)
        .map(|i| SmoothMap::scalar(Polynomial::coordinate(n, i)))
        .collect()
}

/// `d/dt f(c(t))` at `t = 0`.
///
/// Exact when both `f` and the path are polynomial, otherwise a five-point
/// central stencil with step [`PATH_FD_STEP`].
pub fn path_derivative(f: &SmoothMap, c: &PathGerm) -> Result<f64, DiffeoError> {
    let n = c.space.ambient_dim();
    if f.domain_dim() != n {
        return Err(DiffeoError::DomainMismatch {
            expected: n,
            found: f.domain_dim(),
        });
    }
    if f.codomain_dim() != 1 {
        return Err(DiffeoError::NotScalar(0));
    }
    if let (Some(fp), Some(cp)) = (f.polynomials(), c.path.polynomials()) {
        let x0 = c.path.eval(&[0.0]);
        let fp = &fp[0];
        return Ok(cp
            .iter()
            .enumerate()
            .map(|(i, ci)| {
                let speed = ci.partial(0).eval(&[0.0]);
                if speed == 0.0 {
                    0.0
                } else {
                    fp.partial(i).eval(&x0) * speed
                }
            })
            .sum());
    }
    let g = |t: f64| f.eval_scalar(&c.path.eval(&[t]));
    let h = PATH_FD_STEP;
    Ok((-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h))
}

fn check_same_base(c1: &PathGerm, c2: &PathGerm) -> Result<(), DiffeoError> {
    if c1.space.ambient_dim() != c2.space.ambient_dim()
        || !(Arc::ptr_eq(&c1.space, &c2.space) || c1.space.label() == c2.space.label())
    {
        return Err(DiffeoError::SpaceMismatch);
    }
    let same = c1
        .base_point
        .iter()
        .zip(&c2.base_point)
        .all(|(a, b)| (a - b).abs() <= BASE_POINT_TOL);
    if same {
        Ok(())
    } else {
        Err(DiffeoError::BasePointMismatch)
    }
}

/// Whether `c1` and `c2` have equal path derivatives against every test function.
pub fn germs_equivalent(
    c1: &PathGerm,
    c2: &PathGerm,
    test_functions: &[SmoothMap],
) -> Result<bool, DiffeoError> {
    check_same_base(c1, c2)?;
    for f in test_functions {
        let d = path_derivative(f, c1)? - path_derivative(f, c2)?;
        if d.abs() > EQUIVALENCE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One class of equivalent germs found by [`probe_cone`].
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityClass {
    /// Indices into the probed sample list, first member is the representative.
    pub members: Vec<usize>,
    /// Ambient velocity of the representative.
    pub velocity: Vec<f64>,
}

/// Partitions `sample_paths` into internal-external cone classes at `x`.
pub fn probe_cone(
    space: &EmbeddedSpace,
    x: &[f64],
    sample_paths: &[PathGerm],
) -> Result<Vec<VelocityClass>, DiffeoError> {
    if x.len() != space.ambient_dim() {
        return Err(DiffeoError::DomainMismatch {
            expected: space.ambient_dim(),
            found: x.len(),
        });
    }
    let tests = coordinate_functions(space.ambient_dim());
    let mut classes: Vec<VelocityClass> = Vec::new();
    for (i, c) in sample_paths.iter().enumerate() {
        if c.space.ambient_dim() != space.ambient_dim() || c.space.label() != space.label() {
            return Err(DiffeoError::SpaceMismatch);
        }
        if c.base_point
            .iter()
            .zip(x)
            .any(|(a, b)| (a - b).abs() > BASE_POINT_TOL)
        {
            return Err(DiffeoError::BasePointMismatch);
        }
        let mut placed = false;
        for class in &mut classes {
            let rep = &sample_paths[class.members[0]];
            if germs_equivalent(rep, c, &tests)? {
                class.members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(VelocityClass {
                members: vec![i],
                velocity: c.velocity(),
            });
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross() -> Arc<EmbeddedSpace> {
        Arc::new(EmbeddedSpace::cross())
    }

    fn germ(space: &Arc<EmbeddedSpace>, comps: &[Vec<f64>]) -> PathGerm {
        let p = SmoothMap::polynomial_path(comps).unwrap();
        let base = p.eval(&[0.0]);
        PathGerm::new(Arc::clone(space), base, p).unwrap()
    }

    fn poly2(terms: Vec<(f64, Vec<u32>)>) -> SmoothMap {
        SmoothMap::scalar(Polynomial::new(2, terms).unwrap())
    }

    #[test]
    fn product_of_cross_and_point() {
        let p = make_product(&EmbeddedSpace::cross(), &EmbeddedSpace::origin_point());
        assert_eq!(p.ambient_dim(), 3);
        assert_eq!(p.constraints().len(), 2);
        assert_eq!(p.constraints()[0].eval_scalar(&[2.0, 3.0, 5.0]), 6.0);
        assert_eq!(p.constraints()[1].eval_scalar(&[2.0, 3.0, 5.0]), 5.0);
        assert_eq!(p.generating_plots().len(), 2);
    }

    #[test]
    fn product_of_lines_is_plane() {
        let p = make_product(&EmbeddedSpace::euclidean(1), &EmbeddedSpace::euclidean(1));
        assert_eq!(p.ambient_dim(), 2);
        assert!(p.constraints().is_empty());
    }

    #[test]
    fn torus_plots_satisfy_both_constraints() {
        let t = make_product(&EmbeddedSpace::circle(), &EmbeddedSpace::circle());
        assert_eq!(t.ambient_dim(), 4);
        assert_eq!(t.constraints().len(), 2);
        let plot = &t.generating_plots()[0];
        let pts = grid_points(plot.domain(), 10);
        assert_eq!(pts.len(), 100);
        for u in pts {
            let y = plot.eval(&u);
            for c in t.constraints() {
                assert!(c.eval_scalar(&y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn off_space_plot_is_rejected() {
        let diagonal = SmoothMap::polynomial_path(&[vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let xy = poly2(vec![(1.0, vec![1, 1])]);
        let err = EmbeddedSpace::new("bad", 2, vec![xy], vec![diagonal]).unwrap_err();
        assert!(matches!(err, DiffeoError::PlotOffSpace { plot: 0, .. }));
    }

    #[test]
    fn germ_validation() {
        let s = cross();
        let off = SmoothMap::polynomial_path(&[vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            PathGerm::new(Arc::clone(&s), vec![0.0, 0.0], off),
            Err(DiffeoError::PathOffSpace { .. })
        ));
        let shifted = SmoothMap::polynomial_path(&[vec![1.0, 1.0], vec![0.0]]).unwrap();
        assert!(matches!(
            PathGerm::new(s, vec![0.0, 0.0], shifted),
            Err(DiffeoError::PathNotAtBase { .. })
        ));
    }

    #[test]
    fn path_derivative_examples() {
        let s = cross();
        let c = germ(&s, &[vec![0.0, 1.0], vec![0.0]]);
        let x = poly2(vec![(1.0, vec![1, 0])]);
        let xy = poly2(vec![(1.0, vec![1, 1])]);
        assert_eq!(path_derivative(&x, &c).unwrap(), 1.0);
        assert_eq!(path_derivative(&xy, &c).unwrap(), 0.0);

        // f = x^2 + 3y; composites t^2 + 3t^2 and t^2 + 3t differentiate to 0 and 3.
        let plane = Arc::new(EmbeddedSpace::euclidean(2));
        let f = poly2(vec![(1.0, vec![2, 0]), (3.0, vec![0, 1])]);
        let parabola = germ(&plane, &[vec![0.0, 1.0], vec![0.0, 0.0, 1.0]]);
        let diagonal = germ(&plane, &[vec![0.0, 1.0], vec![0.0, 1.0]]);
        assert_eq!(path_derivative(&f, &parabola).unwrap(), 0.0);
        assert_eq!(path_derivative(&f, &diagonal).unwrap(), 3.0);

        // same values through the finite-difference route
        let fo = SmoothMap::from_fn(2, 1, |x| vec![x[0] * x[0] + 3.0 * x[1]]);
        let diag_fn = SmoothMap::from_fn(1, 2, |t| vec![t[0], t[0]]);
        let g = PathGerm::new(plane, vec![0.0, 0.0], diag_fn).unwrap();
        assert!((path_derivative(&fo, &g).unwrap() - 3.0).abs() < 1e-10);

        let f3 = SmoothMap::scalar(Polynomial::coordinate(3, 0));
        assert!(matches!(
            path_derivative(&f3, &c),
            Err(DiffeoError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn equivalence_examples() {
        let s = cross();
        let tests = coordinate_functions(2);
        let ex = germ(&s, &[vec![0.0, 1.0], vec![0.0]]);
        let ex_again = germ(&s, &[vec![0.0, 1.0], vec![0.0, 0.0, 0.0]]);
        let ey = germ(&s, &[vec![0.0], vec![0.0, 1.0]]);
        let ex2 = germ(&s, &[vec![0.0, 2.0], vec![0.0]]);
        assert!(germs_equivalent(&ex, &ex_again, &tests).unwrap());
        assert!(!germs_equivalent(&ex, &ey, &tests).unwrap());
        assert!(!germs_equivalent(&ex, &ex2, &tests).unwrap());

        let plane = Arc::new(EmbeddedSpace::euclidean(2));
        let elsewhere = PathGerm::new(
            Arc::clone(&plane),
            vec![1.0, 0.0],
            SmoothMap::polynomial_path(&[vec![1.0, 1.0], vec![0.0]]).unwrap(),
        )
        .unwrap();
        let at_origin = germ(&plane, &[vec![0.0, 1.0], vec![0.0]]);
        assert_eq!(
            germs_equivalent(&elsewhere, &at_origin, &tests),
            Err(DiffeoError::BasePointMismatch)
        );
        assert_eq!(
            germs_equivalent(&ex, &at_origin, &tests),
            Err(DiffeoError::SpaceMismatch)
        );
    }

    #[test]
    fn probe_cross_axes_at_several_speeds() {
        let s = cross();
        let mut paths = Vec::new();
        for speed in [1.0, -1.0, 2.0, -2.0] {
            paths.push(germ(&s, &[vec![0.0, speed], vec![0.0]]));
            paths.push(germ(&s, &[vec![0.0], vec![0.0, speed]]));
        }
        let classes = probe_cone(&s, &[0.0, 0.0], &paths).unwrap();
        assert_eq!(classes.len(), 8);
        for c in &classes {
            assert!(c.velocity[0] == 0.0 || c.velocity[1] == 0.0);
        }
    }

    #[test]
    fn probe_circle() {
        let s = Arc::new(EmbeddedSpace::circle());
        let paths: Vec<_> = [1.0, 2.0, 1.0]
            .iter()
            .map(|&a: &f64| {
                let p = SmoothMap::from_fn(1, 2, move |t| vec![(a * t[0]).cos(), (a * t[0]).sin()]);
                PathGerm::new(Arc::clone(&s), vec![1.0, 0.0], p).unwrap()
            })
            .collect();
        let classes = probe_cone(&s, &[1.0, 0.0], &paths).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].members, vec![0, 2]);
        assert!((classes[0].velocity[1] - 1.0).abs() < 1e-8);
        assert!((classes[1].velocity[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn constant_path_gives_zero_class() {
        let s = cross();
        let c = germ(&s, &[vec![0.0], vec![0.0]]);
        let classes = probe_cone(&s, &[0.0, 0.0], &[c]).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].velocity, vec![0.0, 0.0]);
    }
}
