use diffeo_core::mesh::{
    read_mesh, refine, refine_sequence, validate, write_mesh, RefinementRule, Triangulation2D,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n × n` grid on the unit square, each cell cut along its diagonal.
fn grid(n: usize) -> Triangulation2D {
    let h = 1.0 / n as f64;
    let mut v = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            v.push([i as f64 * h, j as f64 * h]);
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut f = Vec::new();
    for j in 0..n {
        for i in 0..n {
            f.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            f.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Triangulation2D::new(v, f, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
}

/// Grid with interior vertices jittered by up to `0.25 h`.
fn jittered(n: usize, seed: u64) -> Triangulation2D {
    let t = grid(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: Vec<[f64; 2]> = t
        .vertices()
        .iter()
        .map(|p| {
            let interior = p.iter().all(|&c| c > 1e-12 && c < 1.0 - 1e-12);
            if interior {
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
            } else {
                [0.0, 0.0]
            }
        })
        .collect();
    t.perturb_vertices(|v| d[v], 0.25 / n as f64)
}

fn centred_square() -> Triangulation2D {
    Triangulation2D::new(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]],
        vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
    )
    .unwrap()
}

#[test]
fn refinement_keeps_random_meshes_valid() {
    let mu = RefinementRule::midpoint4();
    for seed in 0..20 {
        let t = jittered(2 + (seed as usize % 4), seed);
        assert!(validate(&t).is_valid(), "seed {seed}");
        let r = refine(&t, &mu).unwrap();
        let report = validate(&r);
        assert!(report.is_valid(), "seed {seed}\n{report}");
        assert_eq!(r.vertices().len(), t.vertices().len() + t.edges().len());
        assert_eq!(r.len(), 4 * t.len());
        assert!((0..r.len()).all(|f| r.simplex_area(f) > 0.0));
        assert!((r.total_area() - t.total_area()).abs() <= 1e-12);
    }
}

#[test]
fn three_levels_of_the_unit_square() {
    let seq = refine_sequence(&Triangulation2D::unit_square(), &RefinementRule::midpoint4(), 3).unwrap();
    let counts: Vec<usize> = seq.iter().map(|t| t.len()).collect();
    assert_eq!(counts, vec![2, 8, 32, 128]);
    for w in seq.windows(2) {
        assert_eq!(w[1].mesh_size().unwrap(), w[0].mesh_size().unwrap() / 2.0);
        assert!(validate(&w[1]).is_valid());
    }
    assert_eq!(seq[3].total_area(), 1.0);
}

#[test]
fn small_move_stays_valid_and_flip_inverts() {
    let t = centred_square();
    let nudged = t.perturb_vertices(|v| if v == 4 { [0.01, 0.0] } else { [0.0, 0.0] }, 1.0);
    assert!(validate(&nudged).is_valid());
    let flipped = t.perturb_vertices(|v| if v == 4 { [0.6, 0.0] } else { [0.0, 0.0] }, 1.0);
    let report = validate(&flipped);
    assert!(!report.is_valid());
    assert_eq!(report.inverted, vec![1]);
}

#[test]
fn max_valid_scale_finds_the_edge() {
    let t = centred_square();
    let s = t.max_valid_scale(|v| if v == 4 { [1.0, 0.0] } else { [0.0, 0.0] }, 1.0);
    assert!((s - 0.5).abs() <= 1e-5, "{s}");
}

#[test]
fn overlap_is_reported_as_pair() {
    let t = Triangulation2D::new(
        vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.2, 0.2], [1.2, 0.2], [0.2, 1.2]],
        vec![[0, 1, 2], [3, 4, 5]],
        vec![[0.0, 0.0], [1.2, 0.0], [1.2, 1.2], [0.0, 1.2]],
    )
    .unwrap();
    let report = validate(&t);
    assert!(!report.disjoint_ok());
    assert_eq!(report.offending_pairs(), vec![(0, 1)]);
}

#[test]
fn text_round_trip() {
    let t = jittered(3, 77);
    let back = read_mesh(&write_mesh(&t)).unwrap();
    assert_eq!(back.vertices(), t.vertices());
    assert_eq!(back.faces(), t.faces());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn refinement_conserves_area_and_orientation(n in 1usize..5, seed in any::<u64>(), levels in 1usize..3) {
        let t = jittered(n, seed);
        let seq = refine_sequence(&t, &RefinementRule::midpoint4(), levels).unwrap();
        for w in seq.windows(2) {
            prop_assert_eq!(w[1].len(), 4 * w[0].len());
            prop_assert_eq!(w[1].vertices().len(), w[0].vertices().len() + w[0].edges().len());
            prop_assert!((w[1].total_area() - 1.0).abs() <= 1e-12);
            prop_assert!((0..w[1].len()).all(|f| w[1].simplex_area(f) > 0.0));
            let ratio = w[1].mesh_size().unwrap() / w[0].mesh_size().unwrap();
            prop_assert!((ratio - 0.5).abs() <= 1e-12);
        }
    }
}
