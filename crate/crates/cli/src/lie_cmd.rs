use std::path::Path;

use diffeo_core::lie::{
    holonomy, horizontal_lift, logm, solve_flat_primitive, solve_logarithmic, AlgebraPath, BasePath,
    ConnectionForm, ExpProduct, GroupPath, Mat, MatrixGroupSpec, Side,
};
use serde_json::json;

use crate::output::{matrix_cells, matrix_header, matrix_json, num, write_csv, write_report};
use crate::{ctx, output_dir, CliError, Config, RunReport};

fn group(cfg: &Config) -> Result<MatrixGroupSpec, CliError> {
    let n = cfg.usize_or("group.n", 2)?;
    if n == 0 {
        return Err(CliError::new("group.n must be at least 1"));
    }
    match cfg.str("group.kind")? {
        "so" => Ok(MatrixGroupSpec::special_orthogonal(n)),
        "sl" => Ok(MatrixGroupSpec::special_linear(n)),
        other => Err(CliError::new(format!("group.kind must be so or sl; found `{other}`"))),
    }
}

fn check_dims(key: &str, ms: &[Mat], n: usize) -> Result<(), CliError> {
    match ms.iter().position(|m| m.nrows() != n) {
        Some(i) => Err(CliError::new(format!("{key}[{i}] is not {n}x{n}"))),
        None => Ok(()),
    }
}

/// `connection.kind`:
/// - `constant`: `connection.components = [A_1, …, A_p]`, θ = Σ A_i dx_i;
/// - `polynomial`: `connection.generators = [G_1, …]` and
///   `connection.coefficients[i][k]`, θ_i(x) = Σ_k p_ik(x) G_k;
/// - `maurer_cartan`: `connection.generators` and `connection.exponents[k]`,
///   the right Maurer–Cartan form of `x ↦ Π_k exp(p_k(x) G_k)`.
fn connection(cfg: &Config, n: usize) -> Result<ConnectionForm, CliError> {
    match cfg.str("connection.kind")? {
        "constant" => {
            let comps = cfg.matrices("connection.components")?;
            check_dims("connection.components", &comps, n)?;
            Ok(ConnectionForm::constant(comps))
        }
        "polynomial" => {
            let gens = cfg.matrices("connection.generators")?;
            check_dims("connection.generators", &gens, n)?;
            let table = cfg.polynomial_table("connection.coefficients")?;
            let p = table.len();
            for (i, row) in table.iter().enumerate() {
                if row.len() != gens.len() {
                    return Err(CliError::new(format!(
                        "connection.coefficients[{i}] needs one polynomial per generator"
                    )));
                }
                if let Some(j) = row.iter().position(|q| q.nvars() != p) {
                    return Err(CliError::new(format!(
                        "connection.coefficients[{i}][{j}] must have {p} variables"
                    )));
                }
            }
            Ok(ConnectionForm::from_components(p, n, move |x| {
                table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&gens)
                            .fold(Mat::zeros(n, n), |acc, (q, g)| acc + g * q.eval(x))
                    })
                    .collect()
            }))
        }
        "maurer_cartan" => {
            let gens = cfg.matrices("connection.generators")?;
            check_dims("connection.generators", &gens, n)?;
            let polys = cfg.polynomials("connection.exponents")?;
            if polys.len() != gens.len() {
                return Err(CliError::new("connection.exponents needs one polynomial per generator"));
            }
            let map = ExpProduct::new(polys.into_iter().zip(gens).collect()).map_err(ctx("connection"))?;
            Ok(map.maurer_cartan())
        }
        other => Err(CliError::new(format!(
            "connection.kind must be constant, polynomial or maurer_cartan; found `{other}`"
        ))),
    }
}

/// `loop.kind`: `circle` (`loop.center`, `loop.radius`), `square`
/// (`loop.origin`, `loop.side`) or `polygon` (`loop.points`).
fn base_path(cfg: &Config) -> Result<BasePath, CliError> {
    let pair = |key: &str| -> Result<[f64; 2], CliError> {
        let v = cfg.vec(key)?;
        <[f64; 2]>::try_from(v).map_err(|_| CliError::new(format!("{key} must have two entries")))
    };
    match cfg.str("loop.kind")? {
        "circle" => Ok(BasePath::circle(pair("loop.center")?, cfg.f64("loop.radius")?)),
        "square" => Ok(BasePath::square(pair("loop.origin")?, cfg.f64("loop.side")?)),
        "polygon" => BasePath::polygon(&cfg.vecs("loop.points")?).map_err(ctx("loop.points")),
        other => Err(CliError::new(format!("loop.kind must be circle, square or polygon; found `{other}`"))),
    }
}

fn samples_csv(dir: &Path, name: &str, g: &GroupPath) -> Result<std::path::PathBuf, CliError> {
    let n = g.endpoint().nrows();
    let mut header = vec!["t".to_string()];
    header.extend(matrix_header(n));
    let rows: Vec<Vec<String>> = g
        .samples()
        .iter()
        .map(|(t, m)| {
            let mut r = vec![num(*t)];
            r.extend(matrix_cells(m));
            r
        })
        .collect();
    write_csv(&dir.join(name), &header, &rows)
}

pub(crate) fn cmd_solve_log(path: &Path) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let spec = group(&cfg)?;
    let coeffs = cfg.matrices("field.coefficients")?;
    check_dims("field.coefficients", &coeffs, spec.dim())?;
    let side = match cfg.str_or("field.side", "right")? {
        "right" => Side::Right,
        "left" => Side::Left,
        other => return Err(CliError::new(format!("field.side must be left or right; found `{other}`"))),
    };
    let steps = cfg.usize_or("solver.steps", 128)?;
    let dir = output_dir(&cfg)?;
    cfg.finish()?;

    let v = AlgebraPath::polynomial(coeffs);
    let g = solve_logarithmic(&v, &spec, steps, side).map_err(ctx("solve-log"))?;
    let mut files = vec![samples_csv(&dir, "samples.csv", &g)?];
    let end = g.endpoint();
    let details = json!({
        "group": spec.name(),
        "steps": steps,
        "side": if side == Side::Right { "right" } else { "left" },
        "endpoint": matrix_json(end),
        "endpoint_membership_residual": spec.membership_residual(end),
        "max_membership_residual": g.max_membership_residual(),
    });
    let summary = format!(
        "solve-log on {} with {steps} steps, endpoint membership residual {}",
        spec.name(),
        num(spec.membership_residual(end))
    );
    write_report(&dir, 0, &mut files, &summary, &details)?;
    Ok(RunReport {
        status: 0,
        files,
        summary,
        details,
    })
}

pub(crate) fn cmd_holonomy(path: &Path) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let spec = group(&cfg)?;
    let theta = connection(&cfg, spec.dim())?;
    let lp = base_path(&cfg)?;
    let steps = cfg.usize_or("solver.steps", 128)?;
    let dir = output_dir(&cfg)?;
    cfg.finish()?;

    let hol = holonomy(&lp, &theta, &spec, steps).map_err(ctx("holonomy"))?;
    let d = spec.dim();
    let lift = horizontal_lift(&lp, &theta, &Mat::identity(d, d), &spec, steps).map_err(ctx("holonomy"))?;
    let mut files = vec![samples_csv(&dir, "lift.csv", &lift)?];
    let log_norm = logm(&hol).ok().map(|l| l.norm());
    let details = json!({
        "group": spec.name(),
        "steps": steps,
        "holonomy": matrix_json(&hol),
        "holonomy_log_norm": log_norm,
        "distance_to_identity": (&hol - Mat::identity(d, d)).norm(),
        "max_membership_residual": lift.max_membership_residual(),
    });
    let summary = match log_norm {
        Some(l) => format!("holonomy log-norm {}", num(l)),
        None => "holonomy has no real principal logarithm".to_string(),
    };
    write_report(&dir, 0, &mut files, &summary, &details)?;
    Ok(RunReport {
        status: 0,
        files,
        summary,
        details,
    })
}

pub(crate) fn cmd_flat(path: &Path) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let spec = group(&cfg)?;
    let theta = connection(&cfg, spec.dim())?;
    let rect = cfg.vec("domain.rect")?;
    let rect = <[f64; 4]>::try_from(rect).map_err(|_| CliError::new("domain.rect must be [x0, x1, y0, y1]"))?;
    let n = cfg.usize_or("solver.n", 32)?;
    let dir = output_dir(&cfg)?;
    cfg.finish()?;

    let prim = solve_flat_primitive(&theta, rect, &spec, n).map_err(ctx("flat"))?;
    let d = spec.dim();
    let mut header: Vec<String> = ["i", "j", "x", "y"].map(String::from).to_vec();
    header.extend(matrix_header(d));
    let mut rows = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let [x, y] = prim.node(i, j);
            let mut r = vec![i.to_string(), j.to_string(), num(x), num(y)];
            r.extend(matrix_cells(prim.value(i, j)));
            rows.push(r);
        }
    }
    let mut files = vec![write_csv(&dir.join("primitive.csv"), &header, &rows)?];
    let details = json!({
        "group": spec.name(),
        "grid": n,
        "curvature_residual": prim.curvature_residual(),
        "path_independence_residual": prim.path_independence_residual(),
        "recovery_residual": prim.recovery_residual(),
    });
    let summary = format!(
        "flat primitive on a {n}x{n} grid, path independence residual {}, recovery residual {}",
        num(prim.path_independence_residual()),
        num(prim.recovery_residual())
    );
    write_report(&dir, 0, &mut files, &summary, &details)?;
    Ok(RunReport {
        status: 0,
        files,
        summary,
        details,
    })
}
