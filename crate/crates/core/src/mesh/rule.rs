use std::collections::HashMap;

use super::MeshError;

/// A subdivision of the standard simplex `Δ₂` into smaller triangles whose
/// corners have rational barycentric coordinates `weights / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementRule {
    name: String,
    denominator: u32,
    points: Vec<[u32; 3]>,
    sub_simplices: Vec<[usize; 3]>,
}

fn twice_area(p: [u32; 3], q: [u32; 3], r: [u32; 3]) -> i64 {
    // planar coordinates (w1, w2) of barycentric points
    let (px, py) = (i64::from(p[1]), i64::from(p[2]));
    let (qx, qy) = (i64::from(q[1]), i64::from(q[2]));
    let (rx, ry) = (i64::from(r[1]), i64::from(r[2]));
    (qx - px) * (ry - py) - (qy - py) * (rx - px)
}

impl RefinementRule {
    /// Validates the tiling exactly in integer arithmetic: every point lies in
    /// `Δ₂`, every sub-simplex is positively oriented, the areas add up to the
    /// area of `Δ₂`, interior edges are shared by two sub-simplices in
    /// opposite directions and the remaining edges lie on `∂Δ₂`.
    pub fn new(
        name: impl Into<String>,
        denominator: u32,
        points: Vec<[u32; 3]>,
        sub_simplices: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        let bad = |m: String| Err(MeshError::InvalidRule(m));
        if denominator == 0 || sub_simplices.is_empty() {
            return bad("empty rule".into());
        }
        for (k, p) in points.iter().enumerate() {
            if p.iter().map(|&w| u64::from(w)).sum::<u64>() != u64::from(denominator) {
                return bad(format!("point {k} is not on the standard simplex"));
            }
        }
        let d = i64::from(denominator);
        let mut area = 0i64;
        let mut edges: HashMap<(usize, usize), i32> = HashMap::new();
        for (k, s) in sub_simplices.iter().enumerate() {
            if s.iter().any(|&i| i >= points.len()) {
                return bad(format!("sub-simplex {k} refers to a missing point"));
            }
            let a = twice_area(points[s[0]], points[s[1]], points[s[2]]);
            if a <= 0 {
                return bad(format!("sub-simplex {k} is not positively oriented"));
            }
            area += a;
            for (p, q) in [(s[0], s[1]), (s[1], s[2]), (s[2], s[0])] {
                *edges.entry((p, q)).or_default() += 1;
            }
        }
        if area != d * d {
            return bad(format!("sub-simplex areas sum to {area}/{} instead of 1", d * d));
        }
        for (&(p, q), &n) in &edges {
            if n > 1 {
                return bad(format!("edge {p}-{q} is used twice in the same direction"));
            }
            if edges.contains_key(&(q, p)) {
                continue;
            }
            let (a, b) = (points[p], points[q]);
            if !(0..3).any(|i| a[i] == 0 && b[i] == 0) {
                return bad(format!("edge {p}-{q} is unmatched inside the simplex"));
            }
        }
        Ok(Self {
            name: name.into(),
            denominator,
            points,
            sub_simplices,
        })
    }

    /// Four-way midpoint subdivision: three corner triangles and the
    /// inverted central one.
    pub fn midpoint4() -> Self {
        let points = vec![
            [2, 0, 0],
            [0, 2, 0],
            [0, 0, 2],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ];
        let (v0, v1, v2, m01, m02, m12) = (0, 1, 2, 3, 4, 5);
        Self::new(
            "midpoint4",
            2,
            points,
            vec![[v0, m01, m02], [m01, v1, m12], [m02, m12, v2], [m12, m02, m01]],
        )
        .expect("midpoint rule tiles the simplex")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn points(&self) -> &[[u32; 3]] {
        &self.points
    }

    pub fn sub_simplices(&self) -> &[[usize; 3]] {
        &self.sub_simplices
    }
}
