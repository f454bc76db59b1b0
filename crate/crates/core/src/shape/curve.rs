use std::f64::consts::PI;

use robust::{orient2d, Coord};

use super::ShapeError;

/// Minimum number of nodes of a discrete curve.
pub const MIN_NODES: usize = 8;
/// Edges shorter than this make a curve degenerate.
pub const MIN_EDGE: f64 = 1e-12;

pub type Point = [f64; 2];

/// A simple closed polygon; node `N-1` connects back to node `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    nodes: Vec<Point>,
}

impl DiscreteCurve {
    /// Validates node count, edge lengths and simplicity.
    pub fn new(nodes: Vec<Point>) -> Result<Self, ShapeError> {
        let curve = Self::unchecked(nodes)?;
        if let Some((i, j)) = curve.first_crossing() {
            return Err(ShapeError::SelfIntersecting(i, j));
        }
        Ok(curve)
    }

    /// Checks node count, finiteness and edge lengths but not simplicity.
    fn unchecked(nodes: Vec<Point>) -> Result<Self, ShapeError> {
        if nodes.len() < MIN_NODES {
            return Err(ShapeError::TooFewNodes(nodes.len()));
        }
        if nodes.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ShapeError::NonFiniteNode);
        }
        let curve = Self { nodes };
        if let Some((edge, length)) = curve
            .edge_lengths()
            .into_iter()
            .enumerate()
            .find(|(_, l)| !(*l > MIN_EDGE))
        {
            return Err(ShapeError::DegenerateCurve { edge, length });
        }
        Ok(curve)
    }

    /// Ellipse with semi-axes `a`, `b` sampled at `n` equally spaced angles,
    /// counter-clockwise starting on the positive x-axis.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self, ShapeError> {
        Self::new(
            (0..n)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    [a * t.cos(), b * t.sin()]
                })
                .collect(),
        )
    }

    pub fn circle(radius: f64, n: usize) -> Result<Self, ShapeError> {
        Self::ellipse(radius, radius, n)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn into_nodes(self) -> Vec<Point> {
        self.nodes
    }

    /// Node coordinates interleaved as `x0, y0, x1, y1, …`.
    pub fn flat(&self) -> Vec<f64> {
        self.nodes.iter().flatten().copied().collect()
    }

    /// Same curve with labels shifted: node `i` of the result is node `i + m`.
    pub fn rotate_labels(&self, m: usize) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.rotate_left(m % self.len());
        Self { nodes }
    }

    /// `|c_{i+1} - c_i|` for every edge `i`.
    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| dist(self.nodes[i], self.nodes[(i + 1) % n]))
            .collect()
    }

    /// Arclength weight of each node: half of its two incident edges.
    pub fn dual_lengths(&self) -> Vec<f64> {
        let e = self.edge_lengths();
        let n = e.len();
        (0..n).map(|i| 0.5 * (e[(i + n - 1) % n] + e[i])).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    /// Shoelace area; positive for counter-clockwise curves.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.nodes)
    }

    /// Outward unit normal at each node (central-difference tangent).
    pub fn outward_normals(&self) -> Vec<Point> {
        let n = self.len();
        let orient = self.signed_area().signum();
        (0..n)
            .map(|i| {
                let a = self.nodes[(i + n - 1) % n];
                let b = self.nodes[(i + 1) % n];
                let t = [b[0] - a[0], b[1] - a[1]];
                let norm = t[0].hypot(t[1]);
                [orient * t[1] / norm, -orient * t[0] / norm]
            })
            .collect()
    }

    /// Pair of non-adjacent edges that intersect, if any.
    pub fn first_crossing(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for i in 0..n {
            let (a, b) = (self.nodes[i], self.nodes[(i + 1) % n]);
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (self.nodes[j], self.nodes[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Node-wise displacement `self + field`, validated as a new curve.
    pub fn displaced(&self, field: &TangentField, scale: f64) -> Result<Self, ShapeError> {
        check_len(self.len(), field.len())?;
        Self::new(
            self.nodes
                .iter()
                .zip(field.values())
                .map(|(p, v)| [p[0] + scale * v[0], p[1] + scale * v[1]])
                .collect(),
        )
    }

    /// Symmetric Hausdorff distance between the two polygons.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        one_sided(self, other).max(one_sided(other, self))
    }
}

fn one_sided(a: &DiscreteCurve, b: &DiscreteCurve) -> f64 {
    let n = b.len();
    a.nodes
        .iter()
        .map(|&p| {
            (0..n)
                .map(|j| point_segment_distance(p, b.nodes[j], b.nodes[(j + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let denom = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if denom > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

pub(crate) fn signed_area(nodes: &[Point]) -> f64 {
    let n = nodes.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (nodes[i], nodes[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

/// Exact sign of the orientation determinant of `(a, b, c)`.
pub(crate) fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let d = orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    );
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test with exact orientation predicates.
pub(crate) fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<(), ShapeError> {
    if expected == found {
        Ok(())
    } else {
        Err(ShapeError::LengthMismatch { expected, found })
    }
}

/// A displacement (or covector) per node of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    values: Vec<Point>,
}

impl TangentField {
    pub fn new(values: Vec<Point>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![[0.0; 2]; n],
        }
    }

    /// From interleaved coordinates `x0, y0, x1, y1, …`.
    pub fn from_flat(flat: &[f64]) -> Self {
        assert!(flat.len() % 2 == 0, "flat field must have even length");
        Self {
            values: flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
        }
    }

    /// Normal field `α_i n_i` along `curve`.
    pub fn from_normal(curve: &DiscreteCurve, coefficients: &[f64]) -> Result<Self, ShapeError> {
        check_len(curve.len(), coefficients.len())?;
        Ok(Self {
            values: curve
                .outward_normals()
                .iter()
                .zip(coefficients)
                .map(|(n, a)| [a * n[0], a * n[1]])
                .collect(),
        })
    }

    /// Difference of two curves with the same number of nodes.
    pub fn between(from: &DiscreteCurve, to: &DiscreteCurve) -> Result<Self, ShapeError> {
        check_len(from.len(), to.len())?;
        Ok(Self {
            values: from
                .nodes()
                .iter()
                .zip(to.nodes())
                .map(|(a, b)| [b[0] - a[0], b[1] - a[1]])
                .collect(),
        })
    }

    pub fn values(&self) -> &[Point] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn flat(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| [a * v[0], a * v[1]]).collect(),
        }
    }

    /// Euclidean pairing `Σ_i v_i · w_i`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a[0] * b[0] + a[1] * b[1])
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}
