//! Command-line front end for `diffeo_core`.
//!
//! Every command reads one config (or mesh) file, writes its artifacts to an
//! output directory and returns a [`RunReport`]. The process exit code is
//! [`RunReport::status`]: 0 on success, 2 when descent hits `max_iters`, 3 on
//! a line-search failure, 1 on any error.

pub mod config;
mod cone;
mod lie_cmd;
mod mesh_cmd;
mod optimize;
pub mod output;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::Config;

/// Overrides `io.outdir` for every command that writes files.
pub const OUTDIR_ENV: &str = "DIFFEO_OPT_OUTDIR";

#[derive(Debug, Parser)]
#[command(name = "diffeo", version, about = "Shape descent, Lie group integration and mesh refinement")]
pub struct Cli {
    /// Omit the creation-time comment from SVG output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steepest descent of a shape functional on closed curves.
    Optimize { config: PathBuf },
    /// Logarithmic equations, holonomy and flat primitives.
    Lie {
        #[command(subcommand)]
        action: LieAction,
    },
    /// Triangulation checks and refinement.
    Mesh {
        #[command(subcommand)]
        action: MeshAction,
    },
    /// Tangent cone probing.
    Cone {
        #[command(subcommand)]
        action: ConeAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum LieAction {
    SolveLog { config: PathBuf },
    Holonomy { config: PathBuf },
    Flat { config: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum MeshAction {
    Validate {
        file: PathBuf,
    },
    Refine {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// Defaults to `<stem>_refined` next to the input.
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConeAction {
    Probe { config: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Maps any displayable library error into a CLI error with context.
pub(crate) fn ctx<E: fmt::Display>(what: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::new(format!("{what}: {e}"))
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: i32,
    pub files: Vec<PathBuf>,
    pub summary: String,
    pub details: serde_json::Value,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub no_timestamp: bool,
}

pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let opts = RunOptions {
        no_timestamp: cli.no_timestamp,
    };
    match &cli.command {
        Command::Optimize { config } => optimize::cmd_optimize(config, opts),
        Command::Lie { action } => match action {
            LieAction::SolveLog { config } => lie_cmd::cmd_solve_log(config),
            LieAction::Holonomy { config } => lie_cmd::cmd_holonomy(config),
            LieAction::Flat { config } => lie_cmd::cmd_flat(config),
        },
        Command::Mesh { action } => match action {
            MeshAction::Validate { file } => mesh_cmd::cmd_validate(file),
            MeshAction::Refine {
                file,
                levels,
                outdir,
            } => mesh_cmd::cmd_refine(file, *levels, outdir.as_deref()),
        },
        Command::Cone { action } => match action {
            ConeAction::Probe { config } => cone::cmd_probe(config),
        },
    }
}

/// `DIFFEO_OPT_OUTDIR` if set, else `io.outdir` relative to the config
/// directory, else `out` there.
pub(crate) fn output_dir(cfg: &Config) -> Result<PathBuf, CliError> {
    let configured = cfg.str_or("io.outdir", "out")?.to_string();
    let dir = match std::env::var_os(OUTDIR_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => cfg.dir().join(configured),
    };
    create_dir(&dir)?;
    Ok(dir)
}

pub(crate) fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::new(format!("cannot create {}: {e}", dir.display())))
}
