//! Validity of a triangulation: orientation, covering, disjoint interiors and
//! conformity. All incidence and intersection tests use exact orientation
//! predicates.

use std::collections::HashMap;
use std::fmt;

use super::{Point, Triangulation2D};
use crate::shape::orientation;

/// Relative tolerance of the covering condition.
pub const COVERING_TOL: f64 = 1e-9;

/// Per-condition outcome of [`validate`]. Empty offender lists mean the
/// condition holds.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    /// Simplices that are degenerate or negatively oriented.
    pub inverted: Vec<usize>,
    /// `Σ |area|` over simplices.
    pub simplex_area: f64,
    pub domain_area: f64,
    /// Vertices outside the domain polygon.
    pub outside: Vec<usize>,
    /// Simplex pairs with overlapping interiors.
    pub overlapping: Vec<(usize, usize)>,
    /// Simplex pairs meeting along something other than a full shared edge
    /// or vertex.
    pub nonconforming: Vec<(usize, usize)>,
    /// Simplices with an unshared edge that is not on the domain boundary.
    pub stray_boundary: Vec<usize>,
}

impl ValidityReport {
    pub fn orientation_ok(&self) -> bool {
        self.inverted.is_empty()
    }

    pub fn covering_ok(&self) -> bool {
        self.outside.is_empty()
            && (self.simplex_area - self.domain_area).abs() <= COVERING_TOL * self.domain_area.abs()
    }

    pub fn disjoint_ok(&self) -> bool {
        self.overlapping.is_empty()
    }

    pub fn conformity_ok(&self) -> bool {
        self.nonconforming.is_empty() && self.stray_boundary.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.orientation_ok() && self.covering_ok() && self.disjoint_ok() && self.conformity_ok()
    }

    /// All offending simplex pairs, sorted.
    pub fn offending_pairs(&self) -> Vec<(usize, usize)> {
        let mut p: Vec<_> = self.overlapping.iter().chain(&self.nonconforming).copied().collect();
        p.sort_unstable();
        p.dedup();
        p
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "orientation: {} inverted={:?}", verdict(self.orientation_ok()), self.inverted)?;
        writeln!(
            f,
            "covering: {} simplex_area={} domain_area={} outside={:?}",
            verdict(self.covering_ok()),
            self.simplex_area,
            self.domain_area,
            self.outside
        )?;
        writeln!(f, "disjointness: {} overlapping={:?}", verdict(self.disjoint_ok()), self.overlapping)?;
        write!(
            f,
            "conformity: {} nonconforming={:?} stray_boundary={:?}",
            verdict(self.conformity_ok()),
            self.nonconforming,
            self.stray_boundary
        )
    }
}

fn within_box(a: Point, b: Point, p: Point) -> bool {
    a[0].min(b[0]) <= p[0] && p[0] <= a[0].max(b[0]) && a[1].min(b[1]) <= p[1] && p[1] <= a[1].max(b[1])
}

pub(crate) fn on_polygon_boundary(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    (0..n).any(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        orientation(a, b, p) == 0 && within_box(a, b, p)
    })
}

fn segment_on_boundary(poly: &[Point], p: Point, q: Point) -> bool {
    let n = poly.len();
    (0..n).any(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        orientation(a, b, p) == 0 && orientation(a, b, q) == 0 && within_box(a, b, p) && within_box(a, b, q)
    })
}

/// Exact winding-number test; points on the boundary count as inside.
fn inside_or_on(poly: &[Point], p: Point) -> bool {
    if on_polygon_boundary(poly, p) {
        return true;
    }
    let n = poly.len();
    let mut winding = 0i32;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if a[1] <= p[1] {
            if b[1] > p[1] && orientation(a, b, p) > 0 {
                winding += 1;
            }
        } else if b[1] <= p[1] && orientation(a, b, p) < 0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Counter-clockwise corners, or `None` for a degenerate triangle.
fn ccw(t: [Point; 3]) -> Option<[Point; 3]> {
    match orientation(t[0], t[1], t[2]) {
        1 => Some(t),
        -1 => Some([t[0], t[2], t[1]]),
        _ => None,
    }
}

/// Whether some edge line of `s` weakly separates `t` from `s`.
fn separated_by_edge_of(s: &[Point; 3], t: &[Point; 3]) -> bool {
    (0..3).any(|i| {
        let (a, b) = (s[i], s[(i + 1) % 3]);
        t.iter().all(|&v| orientation(a, b, v) <= 0)
    })
}

fn interiors_overlap(s: &[Point; 3], t: &[Point; 3]) -> bool {
    !separated_by_edge_of(s, t) && !separated_by_edge_of(t, s)
}

fn bbox(t: &[Point; 3]) -> [f64; 4] {
    let xs = t.map(|p| p[0]);
    let ys = t.map(|p| p[1]);
    [
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ys.iter().copied().fold(f64::INFINITY, f64::min),
        ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ]
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn overlapping_pairs(t: &Triangulation2D) -> Vec<(usize, usize)> {
    let tris: Vec<(usize, [Point; 3], [f64; 4])> = (0..t.len())
        .filter_map(|f| ccw(t.corners(f)).map(|c| (f, c, bbox(&c))))
        .collect();
    let mut order: Vec<usize> = (0..tris.len()).collect();
    order.sort_by(|&i, &j| tris[i].2[0].total_cmp(&tris[j].2[0]));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let (fi, ci, bi) = &tris[i];
        for &j in &order[k + 1..] {
            let (fj, cj, bj) = &tris[j];
            if bj[0] >= bi[1] {
                break;
            }
            if bj[2] >= bi[3] || bi[2] >= bj[3] {
                continue;
            }
            if interiors_overlap(ci, cj) {
                out.push(ordered(*fi, *fj));
            }
        }
    }
    out
}

fn conformity(t: &Triangulation2D) -> (Vec<(usize, usize)>, Vec<usize>) {
    let v = t.vertices();
    let mut pairs = Vec::new();
    let mut stray = Vec::new();
    let mut by_edge: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
    let mut face_of_vertex: HashMap<usize, usize> = HashMap::new();
    for (f, s) in t.simplices().iter().enumerate() {
        let [a, b, c] = s.vertex_ids;
        for (p, q) in [(a, b), (b, c), (c, a)] {
            by_edge.entry(ordered(p, q)).or_default().push((f, p < q));
            face_of_vertex.entry(p).or_insert(f);
        }
    }
    let mut edges: Vec<_> = by_edge.iter().collect();
    edges.sort_unstable_by_key(|(e, _)| **e);
    for (&(p, q), faces) in &edges {
        match faces.as_slice() {
            [(f, _)] => {
                if !segment_on_boundary(t.domain(), v[p], v[q]) {
                    stray.push(*f);
                }
            }
            [(f, d), (g, e)] => {
                if d == e {
                    pairs.push(ordered(*f, *g));
                }
            }
            many => {
                for (i, (f, _)) in many.iter().enumerate() {
                    for (g, _) in &many[i + 1..] {
                        pairs.push(ordered(*f, *g));
                    }
                }
            }
        }
    }

    // vertices in use, sorted by position
    let mut used: Vec<usize> = face_of_vertex.keys().copied().collect();
    used.sort_by(|&i, &j| v[i][0].total_cmp(&v[j][0]).then(v[i][1].total_cmp(&v[j][1])).then(i.cmp(&j)));
    for w in used.windows(2) {
        if v[w[0]] == v[w[1]] {
            pairs.push(ordered(face_of_vertex[&w[0]], face_of_vertex[&w[1]]));
        }
    }
    // hanging vertices strictly inside an edge
    for (&(p, q), faces) in &edges {
        let (a, b) = (v[p], v[q]);
        let lo = used.partition_point(|&i| v[i][0] < a[0].min(b[0]));
        for &w in used[lo..].iter().take_while(|&&i| v[i][0] <= a[0].max(b[0])) {
            if w == p || w == q || v[w] == a || v[w] == b {
                continue;
            }
            if within_box(a, b, v[w]) && orientation(a, b, v[w]) == 0 {
                pairs.push(ordered(faces[0].0, face_of_vertex[&w]));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    stray.sort_unstable();
    stray.dedup();
    (pairs, stray)
}

/// Checks orientation, covering, interior disjointness and conformity.
pub fn validate(t: &Triangulation2D) -> ValidityReport {
    let inverted = (0..t.len())
        .filter(|&f| {
            let [a, b, c] = t.corners(f);
            orientation(a, b, c) != 1
        })
        .collect();
    let mut used: Vec<usize> = t.simplices().iter().flat_map(|s| s.vertex_ids).collect();
    used.sort_unstable();
    used.dedup();
    let outside = used
        .into_iter()
        .filter(|&i| !inside_or_on(t.domain(), t.vertices()[i]))
        .collect();
    let (nonconforming, stray_boundary) = conformity(t);
    ValidityReport {
        inverted,
        simplex_area: t.total_area(),
        domain_area: t.domain_area(),
        outside,
        overlapping: overlapping_pairs(t),
        nonconforming,
        stray_boundary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_valid() {
        let r = validate(&Triangulation2D::unit_square());
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.simplex_area, 1.0);
    }

    #[test]
    fn hanging_centre_vertex_breaks_conformity() {
        // one half split at the centre, the other half not
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
        let t = Triangulation2D::new(v.clone(), vec![[0, 1, 2], [0, 4, 3], [4, 2, 3]], v[..4].to_vec()).unwrap();
        let r = validate(&t);
        assert!(r.orientation_ok() && r.covering_ok() && r.disjoint_ok());
        assert!(!r.conformity_ok());
        assert!(r.nonconforming.contains(&(0, 1)) || r.nonconforming.contains(&(0, 2)), "{r}");
    }

    #[test]
    fn duplicated_centre_record_breaks_conformity() {
        let v = vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
            [0.5, 0.5],
        ];
        let faces = vec![[0, 1, 4], [1, 2, 4], [2, 3, 5], [3, 0, 5]];
        let t = Triangulation2D::new(v.clone(), faces, v[..4].to_vec()).unwrap();
        let r = validate(&t);
        assert!(r.covering_ok() && r.disjoint_ok());
        assert!(!r.conformity_ok());
        assert!(!r.nonconforming.is_empty(), "{r}");
        assert!(!r.stray_boundary.is_empty());
    }

    #[test]
    fn overlapping_triangles_fail_covering_and_disjointness() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.5]];
        let t = Triangulation2D::new(v.clone(), vec![[0, 1, 2], [0, 1, 3]], v[..3].to_vec()).unwrap();
        let r = validate(&t);
        assert_eq!(r.simplex_area / r.domain_area, 1.5);
        assert!(!r.covering_ok());
        assert_eq!(r.overlapping, vec![(0, 1)]);
    }

    #[test]
    fn point_location() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(inside_or_on(&sq, [0.5, 0.5]));
        assert!(inside_or_on(&sq, [1.0, 0.3]));
        assert!(!inside_or_on(&sq, [1.0 + 1e-16 * 4.0, 0.3]));
        assert!(!inside_or_on(&sq, [-0.2, 0.5]));
    }
}
