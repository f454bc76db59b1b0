use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

/// Temp dir holding the sample curves plus `name` with the given text.
fn workspace(name: &str, text: &str) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    for f in ["ellipse_2x1.csv", "circle_1.csv", "square.mesh", "overlapping.mesh"] {
        std::fs::copy(configs().join(f), dir.path().join(f)).unwrap();
    }
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    (dir, path)
}

fn diffeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(args)
        .env_remove("DIFFEO_OPT_OUTDIR")
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const TARGET_MATCH: &str = r#"
problem.functional = "target_match"
problem.start = "ellipse_2x1.csv"
problem.target = "circle_1.csv"
metric.kind = "h1"
descent.sigma = 1e-4
io.outdir = "run"
"#;

#[test]
fn ellipse_to_circle_writes_three_artifacts() {
    let (dir, cfg) = workspace("c.toml", TARGET_MATCH);
    let out = diffeo(&["optimize", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let run = dir.path().join("run");
    for f in ["trace.csv", "shapes.svg", "final_curve.csv", "report.json"] {
        assert!(std::fs::metadata(run.join(f)).unwrap().len() > 0, "{f}");
    }
    let trace = std::fs::read_to_string(run.join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,objective,step,grad_norm\n"));
    let r = report(&run);
    assert_eq!(r["details"]["termination"], "converged");
    assert!(r["details"]["hausdorff_to_target"].as_f64().unwrap() <= 1e-3);
    for f in r["files"].as_array().unwrap() {
        assert!(std::fs::metadata(f.as_str().unwrap()).unwrap().len() > 0);
    }
}

#[test]
fn sigma_out_of_range_is_rejected() {
    let (_dir, cfg) = workspace("c.toml", &TARGET_MATCH.replace("1e-4", "1.5"));
    let out = diffeo(&["optimize", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("descent.sigma") && err.contains("(0,1)"), "{err}");
}

#[test]
fn unknown_key_is_named() {
    let (_dir, cfg) = workspace("c.toml", &format!("{TARGET_MATCH}descent.sigmaa = 0.1\n"));
    let out = diffeo(&["optimize", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`descent.sigmaa`"));
}

#[test]
fn start_at_target_converges_immediately() {
    let text = TARGET_MATCH.replace("ellipse_2x1.csv", "circle_1.csv");
    let (dir, cfg) = workspace("c.toml", &text);
    let out = diffeo(&["optimize", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&dir.path().join("run"))["details"]["iterations"], 0);
}

#[test]
fn iteration_cap_exits_two() {
    let (_dir, cfg) = workspace("c.toml", &format!("{TARGET_MATCH}descent.max_iters = 3\n"));
    assert_eq!(diffeo(&["optimize", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn outdir_environment_override() {
    let (dir, cfg) = workspace("c.toml", TARGET_MATCH.replace("ellipse_2x1.csv", "circle_1.csv").as_str());
    let other = dir.path().join("elsewhere");
    let out = Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(["optimize", cfg.to_str().unwrap()])
        .env("DIFFEO_OPT_OUTDIR", &other)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(other.join("trace.csv").exists());
    assert!(!dir.path().join("run").exists());
}

#[test]
fn svg_timestamp_is_optional() {
    let (dir, cfg) = workspace("c.toml", &format!("{TARGET_MATCH}descent.max_iters = 2\n"));
    let svg = dir.path().join("run/shapes.svg");
    diffeo(&["optimize", cfg.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<!-- created"));
    diffeo(&["--no-timestamp", "optimize", cfg.to_str().unwrap()]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(!text.contains("<!--"));
    assert!(text.contains("fill=\"none\""));
    assert_eq!(text.matches("<path").count(), 3);
}

#[test]
fn so2_rotation_endpoint_in_report() {
    let (dir, cfg) = workspace(
        "l.toml",
        "group.kind = \"so\"\ngroup.n = 2\nfield.coefficients = [[[0.0, -1.0], [1.0, 0.0]]]\nio.outdir = \"lie\"\n",
    );
    let out = diffeo(&["lie", "solve-log", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&dir.path().join("lie"));
    let end = &r["details"]["endpoint"];
    let (c, s) = (1f64.cos(), 1f64.sin());
    let expected = [[c, -s], [s, c]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((end[i][j].as_f64().unwrap() - expected[i][j]).abs() <= 1e-10);
        }
    }
    let samples = std::fs::read_to_string(dir.path().join("lie/samples.csv")).unwrap();
    assert!(samples.starts_with("t,g11,g12,g21,g22\n"));
    assert_eq!(samples.lines().count(), 130);
}

#[test]
fn flat_holonomy_is_trivial() {
    let text = std::fs::read_to_string(configs().join("flat_holonomy.toml")).unwrap();
    let (dir, cfg) = workspace("h.toml", &text.replace("out/flat_holonomy", "hol"));
    let out = diffeo(&["lie", "holonomy", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(report(&dir.path().join("hol"))["details"]["holonomy_log_norm"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn open_path_is_not_a_loop() {
    let text = std::fs::read_to_string(configs().join("curved_holonomy.toml")).unwrap();
    let text = text
        .replace("loop.kind = \"square\"", "loop.kind = \"polygon\"\nloop.points = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]")
        .replace("loop.origin = [0.0, 0.0]\n", "")
        .replace("loop.side = 0.1\n", "");
    let (_dir, cfg) = workspace("h.toml", &text);
    let out = diffeo(&["lie", "holonomy", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not closed"), "{}", stderr(&out));
}

#[test]
fn flat_primitive_residuals() {
    let text = std::fs::read_to_string(configs().join("flat_primitive.toml")).unwrap();
    let (dir, cfg) = workspace("f.toml", &text.replace("out/flat_primitive", "flat"));
    let out = diffeo(&["lie", "flat", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&dir.path().join("flat"));
    assert!(r["details"]["path_independence_residual"].as_f64().unwrap() <= 1e-5);
    assert!(r["details"]["recovery_residual"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn curved_connection_is_rejected_by_flat() {
    let text = std::fs::read_to_string(configs().join("curved_holonomy.toml")).unwrap();
    let text = text
        .replace("loop.kind = \"square\"\nloop.origin = [0.0, 0.0]\nloop.side = 0.1\n", "domain.rect = [0.0, 1.0, 0.0, 1.0]\n")
        .replace("solver.steps = 64", "solver.n = 8");
    let (_dir, cfg) = workspace("f.toml", &text);
    let out = diffeo(&["lie", "flat", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not flat"), "{}", stderr(&out));
}

#[test]
fn mesh_refine_halves_mesh_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = diffeo(&[
        "mesh",
        "refine",
        configs().join("square.mesh").to_str().unwrap(),
        "--levels",
        "3",
        "--outdir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("mesh_size.csv")).unwrap();
    let h: Vec<f64> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(h, vec![2f64.sqrt(), 2f64.sqrt() / 2.0, 2f64.sqrt() / 4.0, 2f64.sqrt() / 8.0]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().take(5).collect::<Vec<_>>().join("\n"), csv.trim_end());
    let level3 = std::fs::read_to_string(dir.path().join("level_3.mesh")).unwrap();
    assert!(level3.starts_with("81 128\n"));
}

#[test]
fn overlapping_mesh_reports_faces() {
    let out = diffeo(&["mesh", "validate", configs().join("overlapping.mesh").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("(0, 1)"));
    let ok = diffeo(&["mesh", "validate", configs().join("square.mesh").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn cross_probe_rows_lie_on_axes() {
    let text = std::fs::read_to_string(configs().join("cross_probe.toml")).unwrap();
    let (dir, cfg) = workspace("p.toml", &text.replace("out/cross_probe", "probe"));
    let out = diffeo(&["cone", "probe", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("probe/classes.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("class_id,v_1,v_2"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').skip(1).map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!(r[0].abs().min(r[1].abs()) <= 1e-6);
    }
}

#[test]
fn missing_config_exits_one() {
    assert_eq!(diffeo(&["optimize", "/nonexistent/config.toml"]).status.code(), Some(1));
}

#[test]
fn exhausted_backtracking_exits_three() {
    let text = format!("{TARGET_MATCH}descent.alpha_hat = 1000.0\ndescent.max_backtracks = 1\n");
    let (dir, cfg) = workspace("c.toml", &text);
    assert_eq!(diffeo(&["optimize", cfg.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(report(&dir.path().join("run"))["details"]["termination"], "line_search_failure");
}
