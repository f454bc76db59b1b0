use std::f64::consts::PI;

use diffeo_core::lie::{
    adjoint_flow, adjoint_residual, commutator, curvature, expm, holonomy, inverse_path, logm,
    solve_flat_primitive, solve_logarithmic, AlgebraPath, BasePath, ConnectionForm, ExpProduct, Mat,
    MatrixGroupSpec, Side,
};
use diffeo_core::smooth::Polynomial;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lx() -> Mat {
    Mat::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0])
}
fn ly() -> Mat {
    Mat::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0])
}
fn lz() -> Mat {
    Mat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
}

fn rot2(a: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()])
}

fn so2_gen() -> Mat {
    Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

fn poly(terms: &[(f64, [u32; 2])]) -> Polynomial {
    Polynomial::new(2, terms.iter().map(|(c, e)| (*c, e.to_vec())).collect()).unwrap()
}

/// `f₀(x, y) = exp(a L_z) exp(b L_x) exp(c L_y)` with polynomial `a, b, c`.
fn sample_map() -> ExpProduct {
    ExpProduct::new(vec![
        (poly(&[(1.0, [1, 0]), (0.5, [0, 2])]), lz()),
        (poly(&[(0.8, [1, 1]), (1.0, [0, 1]), (-0.3, [3, 0])]), lx()),
        (poly(&[(0.3, [1, 0]), (-0.7, [1, 1])]), ly()),
    ])
    .unwrap()
}

fn fit_order(hs: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[test]
fn constant_so2_field_is_exact_at_every_resolution() {
    let so2 = MatrixGroupSpec::special_orthogonal(2);
    for steps in [8, 16, 32, 64, 128] {
        let g = solve_logarithmic(&AlgebraPath::constant(so2_gen()), &so2, steps, Side::Right).unwrap();
        assert!((g.endpoint() - rot2(1.0)).amax() <= 1e-13, "{steps}");
    }
}

#[test]
fn time_dependent_so2_field_converges_at_fourth_order() {
    let so2 = MatrixGroupSpec::special_orthogonal(2);
    // angle θ(t) = ∫ (cos 3t + t) = sin(3t)/3 + t²/2
    let v = AlgebraPath::scalar_multiple(|t| (3.0 * t).cos() + t, so2_gen());
    let exact = rot2((3.0f64).sin() / 3.0 + 0.5);
    let steps = [8, 16, 32, 64];
    let errs: Vec<f64> = steps
        .iter()
        .map(|&n| (solve_logarithmic(&v, &so2, n, Side::Right).unwrap().endpoint() - &exact).amax())
        .collect();
    let hs: Vec<f64> = steps.iter().map(|&n| 1.0 / n as f64).collect();
    assert!(fit_order(&hs, &errs) >= 3.5, "{errs:?}");
}

#[test]
fn so3_adjoint_rotation() {
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let a = AlgebraPath::constant(lz() * (PI / 2.0));
    let s = adjoint_flow(&a, &lx(), &so3, 128).unwrap();
    assert!((&s.last().unwrap().1 - ly()).amax() <= 1e-6);
    for (t, m) in &s {
        let expected = lx() * (PI / 2.0 * t).cos() + ly() * (PI / 2.0 * t).sin();
        assert!((m - expected).amax() <= 1e-9);
    }
    assert!(adjoint_residual(&a, &s) <= 1e-5);
}

#[test]
fn pullback_of_group_map_is_flat() {
    let theta = sample_map().maurer_cartan();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let om = curvature(&theta, &x, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!(om.amax() <= 1e-5);
    }
}

#[test]
fn flat_holonomy_is_trivial_on_random_loops() {
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let theta = sample_map().maurer_cartan();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..10 {
        let lp = if k % 2 == 0 {
            let r = rng.gen_range(0.05..0.3);
            BasePath::circle([rng.gen_range(r..1.0 - r), rng.gen_range(r..1.0 - r)], r)
        } else {
            let mut pts: Vec<Vec<f64>> = (0..4)
                .map(|j| {
                    let a = PI / 2.0 * j as f64 + rng.gen_range(0.0..1.0);
                    let r = rng.gen_range(0.1..0.4);
                    vec![0.5 + r * a.cos(), 0.5 + r * a.sin()]
                })
                .collect();
            pts.push(pts[0].clone());
            BasePath::polygon(&pts).unwrap()
        };
        let hol = holonomy(&lp, &theta, &so3, 128).unwrap();
        assert!(logm(&hol).unwrap().norm() <= 1e-6, "loop {k}");
    }
}

#[test]
fn small_square_holonomy_order() {
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let (a, b) = (lz(), lx() + ly() * 0.5);
    let theta = ConnectionForm::constant(vec![a.clone(), b.clone()]);
    let eps = [0.1, 0.05, 0.025];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let hol = holonomy(&BasePath::square([0.2, 0.3], e), &theta, &so3, 16).unwrap();
            (logm(&hol).unwrap() - commutator(&a, &b) * (e * e)).norm()
        })
        .collect();
    assert!(fit_order(&eps, &errs) >= 2.7, "{errs:?}");
}

#[test]
fn flat_primitive_recovers_group_map() {
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let f0 = sample_map();
    let prim = solve_flat_primitive(&f0.maurer_cartan(), [0.0, 1.0, 0.0, 1.0], &so3, 32).unwrap();
    assert!(prim.path_independence_residual() <= 1e-5);
    assert!(prim.recovery_residual() <= 1e-4);
    let c = f0.eval(&[0.0, 0.0]).try_inverse().unwrap();
    for j in 0..=32 {
        for i in 0..=32 {
            let [x, y] = prim.node(i, j);
            let m = f0.eval(&[x, y]).try_inverse().unwrap() * prim.value(i, j);
            assert!((m - &c).amax() <= 1e-4);
        }
    }
}

#[test]
fn loop_and_reverse_cancel() {
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let theta = ConnectionForm::from_components(2, 3, |x| vec![lz() * (1.0 + x[1]), lx() * x[0].cos()]);
    let square = BasePath::square([0.1, 0.2], 0.5);
    let there_and_back = square.concat(&square.reverse()).unwrap();
    let hol = holonomy(&there_and_back, &theta, &so3, 64).unwrap();
    assert!((hol - Mat::identity(3, 3)).amax() <= 1e-8);
}

#[test]
fn sl2_double_inverse() {
    let sl2 = MatrixGroupSpec::special_linear(2);
    let v = AlgebraPath::polynomial(vec![
        Mat::from_row_slice(2, 2, &[0.2, 1.0, -0.5, -0.2]),
        Mat::from_row_slice(2, 2, &[-1.0, 0.3, 0.7, 1.0]),
    ]);
    let g = solve_logarithmic(&v, &sl2, 64, Side::Left).unwrap();
    let back = inverse_path(&inverse_path(&g).unwrap()).unwrap();
    assert!(back.max_distance(&g) <= 1e-10);
}

#[test]
fn constant_lift_matches_exponential() {
    let so3 = MatrixGroupSpec::special_orthogonal(3);
    let theta = ConnectionForm::constant(vec![ly()]);
    let g = diffeo_core::lie::horizontal_lift(
        &BasePath::segment(vec![0.0], vec![1.0]),
        &theta,
        &Mat::identity(3, 3),
        &so3,
        8,
    )
    .unwrap();
    assert!((g.endpoint() - expm(&(ly() * -1.0))).amax() <= 1e-14);
}

fn sample_form() -> ConnectionForm {
    ConnectionForm::from_components(2, 3, |x| {
        vec![lz() * (x[0] * x[1]).sin() + lx() * x[1], ly() * (1.0 + x[0] * x[0]) - lz() * x[1].cos()]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curvature_is_antisymmetric_and_bilinear(
        x in proptest::array::uniform2(-1.0f64..1.0),
        u in proptest::array::uniform2(-1.0f64..1.0),
        w in proptest::array::uniform2(-1.0f64..1.0),
        z in proptest::array::uniform2(-1.0f64..1.0),
        ab in proptest::array::uniform2(-2.0f64..2.0),
    ) {
        let theta = sample_form();
        let det = |p: [f64; 2], q: [f64; 2]| (p[0] * q[1] - p[1] * q[0]).abs();
        prop_assume!(det(u, w) > 1e-2 && det(z, w) > 1e-2);
        let mix = [ab[0] * u[0] + ab[1] * z[0], ab[0] * u[1] + ab[1] * z[1]];
        prop_assume!(det(mix, w) > 1e-2);
        let om = |p: [f64; 2], q: [f64; 2]| curvature(&theta, &x, &p, &q).unwrap();
        prop_assert!((om(u, w) + om(w, u)).amax() <= 1e-9);
        let lin = om(mix, w) - om(u, w) * ab[0] - om(z, w) * ab[1];
        prop_assert!(lin.amax() <= 1e-9);
    }

    #[test]
    fn left_right_solutions_are_inverse(c in proptest::array::uniform4(-1.5f64..1.5)) {
        let sl2 = MatrixGroupSpec::special_linear(2);
        let v = AlgebraPath::new(2, move |t| {
            Mat::from_row_slice(2, 2, &[c[0] * t, c[1] + t * t, c[2] - t, -c[0] * t]) + Mat::from_row_slice(2, 2, &[0.0, c[3] * (2.0 * t).sin(), 0.0, 0.0])
        });
        let right = solve_logarithmic(&v, &sl2, 64, Side::Right).unwrap();
        let left = solve_logarithmic(&v.negated(), &sl2, 64, Side::Left).unwrap();
        prop_assert!(right.max_distance(&inverse_path(&left).unwrap()) <= 1e-8);
    }
}
