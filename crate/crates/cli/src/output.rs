//! Curve CSV, generic CSV, SVG and JSON report writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use diffeo_core::lie::Mat;
use diffeo_core::shape::{DiscreteCurve, Point};

use crate::CliError;

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::new(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |e| CliError::new(format!("{}: {e}", path.display()))
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

/// Reads a curve CSV with header `x,y`.
pub fn read_curve(path: &Path) -> Result<DiscreteCurve, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?;
    if header.len() != 2 || header[0].trim() != "x" || header[1].trim() != "y" {
        return Err(CliError::new(format!("{}: header must be `x,y`", path.display())));
    }
    let mut nodes: Vec<Point> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let parse = |k: usize| -> Result<f64, CliError> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CliError::new(format!("{}: bad number on data row {}", path.display(), i + 1)))
        };
        nodes.push([parse(0)?, parse(1)?]);
    }
    DiscreteCurve::new(nodes).map_err(|e| CliError::new(format!("{}: {e}", path.display())))
}

pub fn write_curve(path: &Path, c: &DiscreteCurve) -> Result<PathBuf, CliError> {
    let rows: Vec<Vec<String>> = c.nodes().iter().map(|p| vec![num(p[0]), num(p[1])]).collect();
    write_csv(path, &["x".into(), "y".into()], &rows)
}

/// Row-major column names `g11, g12, …` for an `n × n` matrix.
pub fn matrix_header(n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| format!("g{i}{j}")))
        .collect()
}

pub fn matrix_cells(m: &Mat) -> Vec<String> {
    (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| num(m[(i, j)])))
        .collect()
}

pub fn matrix_json(m: &Mat) -> serde_json::Value {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>())
        .collect()
}

/// One stroke-only closed path in an SVG overlay.
pub struct SvgCurve<'a> {
    pub curve: &'a DiscreteCurve,
    pub stroke: &'a str,
    pub width: f64,
    pub dashed: bool,
}

/// Overlays closed polylines. The y axis points up; the view box is the
/// union bounding box padded by 5% of its extent on each side.
pub fn render_svg(curves: &[SvgCurve<'_>], timestamp: bool) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for c in curves {
        for p in c.curve.nodes() {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
    }
    let (w, h) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
    let (px, py) = (0.05 * w, 0.05 * h);
    let (vx, vy, vw, vh) = (x0 - px, -(y1 + py), w + 2.0 * px, h + 2.0 * py);
    let unit = vw.max(vh) / 400.0;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let _ = writeln!(s, "<!-- created at unix time {secs} -->");
    }
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    for c in curves {
        let mut d = String::new();
        for (i, p) in c.curve.nodes().iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(p[0]), num(-p[1]));
        }
        d.push('Z');
        let dash = if c.dashed {
            format!(" stroke-dasharray=\"{} {}\"", num(4.0 * unit), num(3.0 * unit))
        } else {
            String::new()
        };
        let _ = writeln!(
            s,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{dash}/>",
            c.stroke,
            num(c.width * unit)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    std::fs::write(path, text).map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

/// Writes `report.json` holding the status, the file list (including the
/// report itself), the summary and command-specific fields.
pub fn write_report(
    dir: &Path,
    status: i32,
    files: &mut Vec<PathBuf>,
    summary: &str,
    details: &serde_json::Value,
) -> Result<(), CliError> {
    let path = dir.join("report.json");
    files.push(path.clone());
    let doc = serde_json::json!({
        "status": status,
        "summary": summary,
        "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
        "details": details,
    });
    let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
    write_text(&path, &(text + "\n"))?;
    Ok(())
}
