use std::path::{Path, PathBuf};

use diffeo_core::mesh::{read_mesh, refine_sequence, validate, write_mesh, RefinementRule, Triangulation2D};
use serde_json::json;

use crate::output::{num, write_csv, write_report, write_text};
use crate::{create_dir, ctx, CliError, RunReport, OUTDIR_ENV};

fn load(file: &Path) -> Result<Triangulation2D, CliError> {
    let text = std::fs::read_to_string(file).map_err(ctx(&file.display().to_string()))?;
    read_mesh(&text).map_err(ctx(&file.display().to_string()))
}

fn invalid(t: &Triangulation2D) -> Option<CliError> {
    let report = validate(t);
    if report.is_valid() {
        return None;
    }
    let pairs: Vec<String> = report
        .offending_pairs()
        .iter()
        .map(|(a, b)| format!("({a}, {b})"))
        .collect();
    Some(CliError::new(format!(
        "invalid mesh; offending face pairs [{}]\n{report}",
        pairs.join(", ")
    )))
}

pub(crate) fn cmd_validate(file: &Path) -> Result<RunReport, CliError> {
    let t = load(file)?;
    if let Some(e) = invalid(&t) {
        return Err(e);
    }
    Ok(RunReport {
        status: 0,
        files: Vec::new(),
        summary: validate(&t).to_string(),
        details: json!({ "valid": true, "faces": t.len(), "vertices": t.vertices().len() }),
    })
}

pub(crate) fn cmd_refine(file: &Path, levels: usize, outdir: Option<&Path>) -> Result<RunReport, CliError> {
    let t = load(file)?;
    if let Some(e) = invalid(&t) {
        return Err(e);
    }
    let dir = match (outdir, std::env::var_os(OUTDIR_ENV)) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) if !d.is_empty() => PathBuf::from(d),
        _ => {
            let stem = file.file_stem().map_or("mesh".into(), |s| s.to_string_lossy());
            file.with_file_name(format!("{stem}_refined"))
        }
    };
    create_dir(&dir)?;
    let seq = refine_sequence(&t, &RefinementRule::midpoint4(), levels).map_err(ctx("refine"))?;

    let mut files = Vec::new();
    let mut rows = Vec::new();
    for (k, m) in seq.iter().enumerate() {
        if k > 0 {
            files.push(write_text(&dir.join(format!("level_{k}.mesh")), &write_mesh(m))?);
        }
        let h = m.mesh_size().map_err(ctx("mesh size"))?;
        rows.push(vec![k.to_string(), m.vertices().len().to_string(), m.len().to_string(), num(h)]);
    }
    let header: Vec<String> = ["level", "vertices", "faces", "mesh_size"].map(String::from).to_vec();
    files.push(write_csv(&dir.join("mesh_size.csv"), &header, &rows)?);
    let mut summary = header.join(",");
    for r in &rows {
        summary.push('\n');
        summary.push_str(&r.join(","));
    }
    let details = json!({
        "levels": levels,
        "faces": seq.iter().map(Triangulation2D::len).collect::<Vec<_>>(),
        "mesh_size": rows.iter().map(|r| r[3].parse::<f64>().unwrap_or(f64::NAN)).collect::<Vec<_>>(),
    });
    write_report(&dir, 0, &mut files, "refinement valid at every level", &details)?;
    Ok(RunReport {
        status: 0,
        files,
        summary,
        details,
    })
}
