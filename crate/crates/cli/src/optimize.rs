use std::path::Path;

use diffeo_core::descent::{
    steepest_descent_with, ArmijoParams, DescentError, DifferentialMode, Projection, Retraction, Termination,
};
use diffeo_core::shape::{MetricSpec, ShapeFunctional};
use serde_json::json;

use crate::output::{num, read_curve, render_svg, write_csv, write_curve, write_report, write_text, SvgCurve};
use crate::{ctx, output_dir, CliError, Config, RunOptions, RunReport};

pub(crate) fn exit_status(t: Termination) -> i32 {
    match t {
        Termination::Converged => 0,
        Termination::MaxIters => 2,
        Termination::LineSearchFailure => 3,
    }
}

fn metric(cfg: &Config) -> Result<MetricSpec, CliError> {
    let kind = cfg.str_or("metric.kind", "h1")?.to_string();
    let a0 = cfg.f64_or("metric.a0", 1.0)?;
    let a1 = cfg.f64_or("metric.a1", 1.0)?;
    let s = cfg.f64_or("metric.s", 1.0)?;
    match kind.as_str() {
        "l2" => Ok(MetricSpec::L2 { a0 }),
        "h1" => Ok(MetricSpec::H1 { a0, a1 }),
        "hs" => Ok(MetricSpec::Hs { s }),
        other => Err(CliError::new(format!("metric.kind must be one of l2, h1, hs; found `{other}`"))),
    }
}

fn armijo(cfg: &Config) -> Result<ArmijoParams, CliError> {
    let d = ArmijoParams::default();
    let max_backtracks = cfg.usize_or("descent.max_backtracks", d.max_backtracks as usize)?;
    let p = ArmijoParams {
        alpha_hat: cfg.f64_or("descent.alpha_hat", d.alpha_hat)?,
        sigma: cfg.f64_or("descent.sigma", d.sigma)?,
        rho: cfg.f64_or("descent.rho", d.rho)?,
        max_backtracks: u32::try_from(max_backtracks)
            .map_err(|_| CliError::new("descent.max_backtracks is too large"))?,
        max_iters: cfg.usize_or("descent.max_iters", d.max_iters)?,
        grad_tol: cfg.f64_or("descent.grad_tol", d.grad_tol)?,
    };
    p.validate().map_err(|e| match e {
        DescentError::InvalidParameter { name, value, bound } => {
            CliError::new(format!("descent.{name} = {value} is outside {bound}"))
        }
        other => CliError::new(other.to_string()),
    })?;
    Ok(p)
}

pub(crate) fn cmd_optimize(path: &Path, opts: RunOptions) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let start = read_curve(&cfg.path("problem.start")?)?;
    let functional = match cfg.str("problem.functional")? {
        "length" => ShapeFunctional::Length,
        "enclosed_area" => ShapeFunctional::EnclosedArea,
        "target_match" => ShapeFunctional::target_match(read_curve(&cfg.path("problem.target")?)?),
        other => {
            return Err(CliError::new(format!(
                "problem.functional must be one of length, enclosed_area, target_match; found `{other}`"
            )))
        }
    };
    let metric = metric(&cfg)?;
    let params = armijo(&cfg)?;
    let retraction = match cfg.str_or("descent.retraction", "shift")? {
        "shift" => Retraction::Shift,
        "recenter" => Retraction::ShiftProject(Projection::Recenter),
        "radial" => Retraction::ShiftProject(Projection::Radial),
        other => {
            return Err(CliError::new(format!(
                "descent.retraction must be one of shift, recenter, radial; found `{other}`"
            )))
        }
    };
    let mode = match cfg.str_or("descent.differential", "analytic")? {
        "analytic" => DifferentialMode::Analytic,
        "finite_difference" => DifferentialMode::FiniteDifference,
        other => {
            return Err(CliError::new(format!(
                "descent.differential must be analytic or finite_difference; found `{other}`"
            )))
        }
    };
    let svg_every = cfg.usize_or("io.svg_every", 10)?;
    let dir = output_dir(&cfg)?;
    cfg.finish()?;

    let trace = steepest_descent_with(&functional, &start, &metric, &retraction, &params, mode)
        .map_err(ctx("descent"))?;

    let mut files = Vec::new();
    let rows: Vec<Vec<String>> = (0..trace.iterates.len())
        .map(|k| {
            vec![
                k.to_string(),
                num(trace.objectives[k]),
                trace.step_sizes.get(k).map_or(String::new(), |&a| num(a)),
                num(trace.grad_norms[k]),
            ]
        })
        .collect();
    let header: Vec<String> = ["iter", "objective", "step", "grad_norm"].map(String::from).to_vec();
    files.push(write_csv(&dir.join("trace.csv"), &header, &rows)?);

    let last = trace.iterates.len() - 1;
    let mut layers = vec![SvgCurve {
        curve: &trace.iterates[0],
        stroke: "#888888",
        width: 1.0,
        dashed: false,
    }];
    if svg_every > 0 {
        for k in (svg_every..last).step_by(svg_every) {
            layers.push(SvgCurve {
                curve: &trace.iterates[k],
                stroke: "#7fa7d9",
                width: 0.6,
                dashed: false,
            });
        }
    }
    if let ShapeFunctional::TargetMatch { target, .. } = &functional {
        layers.push(SvgCurve {
            curve: target,
            stroke: "#cc3333",
            width: 1.0,
            dashed: true,
        });
    }
    layers.push(SvgCurve {
        curve: trace.final_curve(),
        stroke: "#000000",
        width: 1.4,
        dashed: false,
    });
    files.push(write_text(&dir.join("shapes.svg"), &render_svg(&layers, !opts.no_timestamp))?);
    files.push(write_curve(&dir.join("final_curve.csv"), trace.final_curve())?);

    let status = exit_status(trace.termination);
    let summary = format!(
        "iterations {}, final objective {}, termination {}",
        trace.iterations(),
        num(trace.final_objective()),
        trace.termination
    );
    let mut details = json!({
        "functional": functional.name(),
        "iterations": trace.iterations(),
        "final_objective": trace.final_objective(),
        "final_grad_norm": trace.grad_norms.last().copied(),
        "termination": trace.termination.as_str(),
        "armijo_violation": trace.first_armijo_violation(params.sigma),
    });
    if let ShapeFunctional::TargetMatch { target, .. } = &functional {
        details["hausdorff_to_target"] = json!(trace.final_curve().hausdorff(target));
    }
    write_report(&dir, status, &mut files, &summary, &details)?;
    Ok(RunReport {
        status,
        files,
        summary,
        details,
    })
}
