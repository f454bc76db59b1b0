use std::collections::HashMap;

use super::{validate, MeshError, Point, RefinementRule, Triangulation2D};

/// Deepest refinement sequence accepted by [`refine_sequence`].
pub const MAX_LEVELS: usize = 10;

/// Composes every simplex with every sub-simplex of `mu`. A new vertex is
/// identified by its sorted `(vertex id, weight)` pairs, so a point shared by
/// neighbouring simplices is computed once and merged exactly.
pub fn refine(t: &Triangulation2D, mu: &RefinementRule) -> Result<Triangulation2D, MeshError> {
    let report = validate(t);
    if !report.is_valid() {
        return Err(MeshError::InvalidInput(report.to_string()));
    }
    let denom = f64::from(mu.denominator());
    let mut vertices: Vec<Point> = t.vertices().to_vec();
    let mut index: HashMap<Vec<(usize, u32)>, usize> = HashMap::new();
    for v in 0..vertices.len() {
        index.insert(vec![(v, mu.denominator())], v);
    }
    // sequential pass fixing the ids of all new points
    let mut local_ids = Vec::with_capacity(t.len());
    for s in t.simplices() {
        let ids: Vec<usize> = mu
            .points()
            .iter()
            .map(|w| {
                let mut key: Vec<(usize, u32)> = s
                    .vertex_ids
                    .iter()
                    .zip(w)
                    .filter(|(_, &wi)| wi > 0)
                    .map(|(&v, &wi)| (v, wi))
                    .collect();
                key.sort_unstable();
                *index.entry(key.clone()).or_insert_with(|| {
                    let mut p = [0.0, 0.0];
                    for &(v, wi) in &key {
                        let q = t.vertices()[v];
                        p[0] += f64::from(wi) * q[0];
                        p[1] += f64::from(wi) * q[1];
                    }
                    vertices.push([p[0] / denom, p[1] / denom]);
                    vertices.len() - 1
                })
            })
            .collect();
        local_ids.push(ids);
    }
    let faces = local_ids
        .iter()
        .flat_map(|ids| mu.sub_simplices().iter().map(move |s| s.map(|k| ids[k])))
        .collect();
    Triangulation2D::new(vertices, faces, t.domain().to_vec())
}

/// `[t, μ(t), …, μ^k(t)]`, every element validated.
pub fn refine_sequence(
    t: &Triangulation2D,
    mu: &RefinementRule,
    k: usize,
) -> Result<Vec<Triangulation2D>, MeshError> {
    if k > MAX_LEVELS {
        return Err(MeshError::TooManyLevels {
            max: MAX_LEVELS,
            found: k,
        });
    }
    let mut seq = vec![t.clone()];
    for _ in 0..k {
        let next = refine(seq.last().expect("non-empty"), mu)?;
        seq.push(next);
    }
    let report = validate(seq.last().expect("non-empty"));
    if !report.is_valid() {
        return Err(MeshError::InvalidInput(report.to_string()));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle_splits_into_four_eighths() {
        let r = refine(&Triangulation2D::unit_right_triangle(), &RefinementRule::midpoint4()).unwrap();
        assert_eq!(r.len(), 4);
        for f in 0..4 {
            assert_eq!(r.simplex_area(f), 0.125);
        }
    }

    #[test]
    fn square_refines_to_eight_triangles_nine_vertices() {
        let r = refine(&Triangulation2D::unit_square(), &RefinementRule::midpoint4()).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.vertices().len(), 9);
        assert!(validate(&r).is_valid());
    }

    #[test]
    fn sequence_counts_and_limits() {
        let mu = RefinementRule::midpoint4();
        let sq = Triangulation2D::unit_square();
        assert_eq!(refine_sequence(&sq, &mu, 0).unwrap(), vec![sq.clone()]);
        let seq = refine_sequence(&sq, &mu, 3).unwrap();
        assert_eq!(seq.iter().map(Triangulation2D::len).collect::<Vec<_>>(), vec![2, 8, 32, 128]);
        assert!(matches!(
            refine_sequence(&sq, &mu, 11),
            Err(MeshError::TooManyLevels { .. })
        ));
    }

    #[test]
    fn invalid_input_is_refused() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.5]];
        let t = Triangulation2D::new(v.clone(), vec![[0, 1, 2], [0, 1, 3]], v[..3].to_vec()).unwrap();
        assert!(matches!(refine(&t, &RefinementRule::midpoint4()), Err(MeshError::InvalidInput(_))));
    }
}
