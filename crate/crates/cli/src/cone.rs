use std::path::Path;
use std::sync::Arc;

use diffeo_core::diffeo::{probe_cone, EmbeddedSpace, PathGerm};
use diffeo_core::smooth::SmoothMap;
use serde_json::json;

use crate::output::{num, write_csv, write_report};
use crate::{ctx, output_dir, CliError, Config, RunReport};

/// `space.kind`: `cross`, `circle`, `euclidean` (`space.dim`) or `custom`
/// (`space.dim`, `space.constraints` as polynomials vanishing on the space).
fn space(cfg: &Config) -> Result<EmbeddedSpace, CliError> {
    match cfg.str("space.kind")? {
        "cross" => Ok(EmbeddedSpace::cross()),
        "circle" => Ok(EmbeddedSpace::circle()),
        "euclidean" => Ok(EmbeddedSpace::euclidean(cfg.usize_or("space.dim", 2)?.max(1))),
        "custom" => {
            let n = cfg.usize_or("space.dim", 2)?;
            let constraints = cfg
                .polynomials("space.constraints")?
                .into_iter()
                .map(SmoothMap::scalar)
                .collect();
            EmbeddedSpace::new("custom", n, constraints, Vec::new()).map_err(ctx("space"))
        }
        other => Err(CliError::new(format!(
            "space.kind must be cross, circle, euclidean or custom; found `{other}`"
        ))),
    }
}

pub(crate) fn cmd_probe(path: &Path) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let space = Arc::new(space(&cfg)?);
    let point = cfg.vec("probe.point")?;
    let paths = cfg.coefficient_paths("probe.paths")?;
    let dir = output_dir(&cfg)?;
    cfg.finish()?;

    let germs: Vec<PathGerm> = paths
        .iter()
        .enumerate()
        .map(|(i, comps)| {
            let map = SmoothMap::polynomial_path(comps).map_err(ctx(&format!("probe.paths[{i}]")))?;
            PathGerm::new(Arc::clone(&space), point.clone(), map).map_err(ctx(&format!("probe.paths[{i}]")))
        })
        .collect::<Result<_, _>>()?;
    let classes = probe_cone(&space, &point, &germs).map_err(ctx("probe"))?;

    let n = space.ambient_dim();
    let mut header = vec!["class_id".to_string()];
    header.extend((1..=n).map(|i| format!("v_{i}")));
    let rows: Vec<Vec<String>> = classes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut r = vec![k.to_string()];
            r.extend(c.velocity.iter().map(|&v| num(v)));
            r
        })
        .collect();
    let mut files = vec![write_csv(&dir.join("classes.csv"), &header, &rows)?];
    let details = json!({
        "space": space.label(),
        "paths": germs.len(),
        "classes": classes
            .iter()
            .map(|c| json!({ "members": c.members, "velocity": c.velocity }))
            .collect::<Vec<_>>(),
    });
    let summary = format!("{} paths, {} velocity classes", germs.len(), classes.len());
    write_report(&dir, 0, &mut files, &summary, &details)?;
    Ok(RunReport {
        status: 0,
        files,
        summary,
        details,
    })
}
