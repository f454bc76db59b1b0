//! Affine triangulations of polygonal planar domains and their refinement
//! sequences.

mod io;
mod refine;
mod rule;
mod validate;

use thiserror::Error;

use crate::shape::orientation;

pub use io::{read_mesh, write_mesh};
pub use refine::{refine, refine_sequence, MAX_LEVELS};
pub use rule::RefinementRule;
pub use validate::{validate, ValidityReport, COVERING_TOL};

pub type Point = [f64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("triangulation has no simplices")]
    EmptyTriangulation,
    #[error("simplex {0} is degenerate")]
    DegenerateSimplex(usize),
    #[error("simplex {face} refers to missing vertex {vertex}")]
    VertexOutOfRange { face: usize, vertex: usize },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFiniteVertex(usize),
    #[error("invalid domain polygon: {0}")]
    InvalidDomain(String),
    #[error("invalid refinement rule: {0}")]
    InvalidRule(String),
    #[error("input triangulation is invalid: {0}")]
    InvalidInput(String),
    #[error("at most {max} refinement levels are supported, got {found}")]
    TooManyLevels { max: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Vertex triple of a triangle, oriented counter-clockwise on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex2 {
    pub vertex_ids: [usize; 3],
}

/// Vertices, triangles and the polygon they are meant to cover.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation2D {
    vertices: Vec<Point>,
    simplices: Vec<Simplex2>,
    domain: Vec<Point>,
}

pub(crate) fn twice_area(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

pub(crate) fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn check_domain(domain: &[Point]) -> Result<Vec<Point>, MeshError> {
    if domain.len() < 3 {
        return Err(MeshError::InvalidDomain("fewer than three vertices".into()));
    }
    if domain.iter().flatten().any(|v| !v.is_finite()) {
        return Err(MeshError::InvalidDomain("non-finite vertex".into()));
    }
    let a = polygon_area(domain);
    if a == 0.0 {
        return Err(MeshError::InvalidDomain("zero area".into()));
    }
    let mut d = domain.to_vec();
    if a < 0.0 {
        d.reverse();
    }
    Ok(d)
}

fn check_ids(vertices: &[Point], faces: &[[usize; 3]]) -> Result<(), MeshError> {
    if let Some(i) = vertices.iter().position(|v| !v[0].is_finite() || !v[1].is_finite()) {
        return Err(MeshError::NonFiniteVertex(i));
    }
    for (f, ids) in faces.iter().enumerate() {
        if let Some(&v) = ids.iter().find(|&&v| v >= vertices.len()) {
            return Err(MeshError::VertexOutOfRange { face: f, vertex: v });
        }
    }
    Ok(())
}

/// Convex hull by the monotone chain, counter-clockwise.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && orientation(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

impl Triangulation2D {
    /// Builds a triangulation of `domain`, orienting every triangle
    /// counter-clockwise. Degenerate triangles are rejected.
    pub fn new(vertices: Vec<Point>, faces: Vec<[usize; 3]>, domain: Vec<Point>) -> Result<Self, MeshError> {
        check_ids(&vertices, &faces)?;
        let simplices = faces
            .into_iter()
            .enumerate()
            .map(|(f, [a, b, c])| match orientation(vertices[a], vertices[b], vertices[c]) {
                1 => Ok(Simplex2 { vertex_ids: [a, b, c] }),
                -1 => Ok(Simplex2 { vertex_ids: [a, c, b] }),
                _ => Err(MeshError::DegenerateSimplex(f)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let domain = check_domain(&domain)?;
        Ok(Self {
            vertices,
            simplices,
            domain,
        })
    }

    /// Like [`Triangulation2D::new`], with the domain taken from the boundary
    /// loop of the mesh, or its convex hull when the boundary edges do not
    /// form a single closed loop.
    pub fn from_faces(vertices: Vec<Point>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        check_ids(&vertices, &faces)?;
        if faces.is_empty() {
            return Err(MeshError::EmptyTriangulation);
        }
        let hull_of = |vs: &[Point]| convex_hull(vs);
        let provisional = Self::new(vertices.clone(), faces, hull_of(&vertices))?;
        let domain = provisional.boundary_loop().unwrap_or_else(|| hull_of(&vertices));
        Self::new(vertices, provisional.faces(), domain)
    }

    /// Unit square split by the diagonal from `(0, 0)` to `(1, 1)`.
    pub fn unit_square() -> Self {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        Self::new(v.clone(), vec![[0, 1, 2], [0, 2, 3]], v).expect("valid square")
    }

    /// The triangle with vertices `(0, 0)`, `(1, 0)`, `(0, 1)`.
    pub fn unit_right_triangle() -> Self {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        Self::new(v.clone(), vec![[0, 1, 2]], v).expect("valid triangle")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Simplex2] {
        &self.simplices
    }

    pub fn faces(&self) -> Vec<[usize; 3]> {
        self.simplices.iter().map(|s| s.vertex_ids).collect()
    }

    pub fn domain(&self) -> &[Point] {
        &self.domain
    }

    /// Every simplex is an affine image of the standard simplex.
    pub fn is_affine(&self) -> bool {
        true
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn corners(&self, face: usize) -> [Point; 3] {
        self.simplices[face].vertex_ids.map(|v| self.vertices[v])
    }

    /// Signed area of a simplex; negative when it has been inverted.
    pub fn simplex_area(&self, face: usize) -> f64 {
        let [a, b, c] = self.corners(face);
        0.5 * twice_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.len()).map(|f| self.simplex_area(f).abs()).sum()
    }

    pub fn domain_area(&self) -> f64 {
        polygon_area(&self.domain)
    }

    /// Undirected edges `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .simplices
            .iter()
            .flat_map(|s| {
                let [a, b, c] = s.vertex_ids;
                [(a, b), (b, c), (c, a)]
            })
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// The directed boundary edges, chained into one closed loop if they
    /// form exactly one.
    fn boundary_loop(&self) -> Option<Vec<Point>> {
        use std::collections::HashMap;
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for s in &self.simplices {
            let [a, b, c] = s.vertex_ids;
            for (p, q) in [(a, b), (b, c), (c, a)] {
                *count.entry((p.min(q), p.max(q))).or_default() += 1;
            }
        }
        let mut next: HashMap<usize, usize> = HashMap::new();
        let mut first = None;
        for s in &self.simplices {
            let [a, b, c] = s.vertex_ids;
            for (p, q) in [(a, b), (b, c), (c, a)] {
                if count[&(p.min(q), p.max(q))] == 1 {
                    if next.insert(p, q).is_some() {
                        return None;
                    }
                    first.get_or_insert(p);
                }
            }
        }
        let start = first?;
        let mut loop_ids = vec![start];
        let mut cur = next[&start];
        while cur != start {
            if loop_ids.len() > next.len() {
                return None;
            }
            loop_ids.push(cur);
            cur = *next.get(&cur)?;
        }
        (loop_ids.len() == next.len()).then(|| loop_ids.iter().map(|&v| self.vertices[v]).collect())
    }

    /// Ids of vertices lying on the domain boundary.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| validate::on_polygon_boundary(&self.domain, self.vertices[v]))
            .collect()
    }

    /// Largest edge length.
    pub fn mesh_size(&self) -> Result<f64, MeshError> {
        if self.is_empty() {
            return Err(MeshError::EmptyTriangulation);
        }
        Ok(self
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                (dx * dx + dy * dy).sqrt()
            })
            .fold(0.0, f64::max))
    }

    /// Moves vertex `v` by `scale · displacement(v)`. Connectivity and
    /// orientation labels are kept, so inverted simplices show up in
    /// [`validate`].
    pub fn perturb_vertices<D>(&self, displacement: D, scale: f64) -> Self
    where
        D: Fn(usize) -> Point,
    {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, p)| {
                let d = displacement(v);
                [p[0] + scale * d[0], p[1] + scale * d[1]]
            })
            .collect();
        Self {
            vertices,
            simplices: self.simplices.clone(),
            domain: self.domain.clone(),
        }
    }

    /// Largest `s ∈ [0, upper]` (to within `1e-6`) for which the perturbed
    /// triangulation is valid, assuming validity at `s = 0`.
    pub fn max_valid_scale<D>(&self, displacement: D, upper: f64) -> f64
    where
        D: Fn(usize) -> Point,
    {
        let ok = |s: f64| validate(&self.perturb_vertices(&displacement, s)).is_valid();
        if ok(upper) {
            return upper;
        }
        let (mut lo, mut hi) = (0.0, upper);
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}
