use diffeo_web::{square_holonomy_values, CurveRun, MeshLevels};

#[test]
fn descent_reaches_the_circle() {
    let run = CurveRun::run(2.0, 1.0, 32, "h1", 1.0, 500).unwrap();
    assert_eq!(run.termination(), "converged");
    let obj = run.objectives();
    assert!(obj.windows(2).all(|w| w[1] <= w[0]));
    let last = run.iterate(usize::MAX);
    let radius_err = last
        .chunks(2)
        .map(|p| (p[0].hypot(p[1]) - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(radius_err <= 1e-3);
    assert_eq!(run.target().len(), 64);
}

#[test]
fn unknown_metric_is_an_error() {
    assert!(CurveRun::run(2.0, 1.0, 32, "h2", 1.0, 10).is_err());
}

#[test]
fn holonomy_values() {
    let v = square_holonomy_values(0.1, 0.2, 0.05, 32).unwrap();
    // curved holonomy matches side² |[A, B]| to leading order
    assert!((v[0] - v[1]).abs() <= 0.05 * v[1]);
    assert!(v[2] <= 1e-8);
    assert!(square_holonomy_values(0.0, 0.0, -1.0, 32).is_err());
}

#[test]
fn mesh_levels() {
    let m = MeshLevels::build(3).unwrap();
    assert_eq!(m.count(), 4);
    assert_eq!(m.triangles(3).len(), 128 * 6);
    let h = m.mesh_sizes();
    assert!(h.windows(2).all(|w| w[1] == w[0] / 2.0));
    assert!(MeshLevels::build(11).is_err());
}
