//! Batch driver for curvature computations on noncommutative tori.
//!
//! The `nct` binary is a thin wrapper around [`run`].

pub mod config;
pub mod driver;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, JobConfig, Overrides};
pub use driver::{Report, RunFlags};
pub use error::{CliError, CliResult};

pub const DEFAULT_OUTPUT_DIR: &str = "nct-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Job {
    Curvature,
    Check,
    GaussBonnet,
    OracleClassical,
    OracleMatrixRep,
    OracleClosedForm,
}

pub struct Invocation {
    pub job: Job,
    pub config: PathBuf,
    pub output: Option<PathBuf>,
    pub overrides: Overrides,
    pub flags: RunFlags,
}

/// Loads the config, runs the job and writes its files. Returns the summary
/// line and the directory written to; check failures come back as
/// [`CliError::Check`] after the report has been written.
pub fn run(inv: &Invocation) -> CliResult<(String, PathBuf)> {
    let cfg = load_config(&inv.config, &inv.overrides)?;
    let report = execute(inv.job, &cfg, inv.flags)?;
    let dir = inv.output.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    write(&report, &dir)?;
    match report.failure {
        Some(f) => Err(CliError::Check(f)),
        None => Ok((report.summary, dir)),
    }
}

pub fn execute(job: Job, cfg: &JobConfig, flags: RunFlags) -> CliResult<Report> {
    match job {
        Job::Curvature => driver::run_curvature(cfg, flags),
        Job::Check => driver::run_checks(cfg, flags),
        Job::GaussBonnet => driver::run_gauss_bonnet(cfg),
        Job::OracleClassical => driver::run_oracle_classical(cfg),
        Job::OracleMatrixRep => driver::run_oracle_matrix_rep(cfg),
        Job::OracleClosedForm => driver::run_oracle_closed_form(cfg),
    }
}

fn write(report: &Report, dir: &Path) -> CliResult<()> {
    report
        .outputs
        .commit(dir)
        .map(|_| ())
        .map_err(|e| CliError::Config(format!("cannot write outputs to {}: {e}", dir.display())))
}
