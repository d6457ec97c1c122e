//! Job configuration: JSON on disk, validated into engine objects.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nctorus::algebra::{CoeffRecord, Element, TorusContext};
use nctorus::geometry::Metric;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 64;

/// Names accepted in the `checks` list.
pub const CHECK_NAMES: [&str; 9] = [
    "torsion",
    "compatibility",
    "self_adjointness",
    "bianchi",
    "antisymmetry",
    "associativity",
    "star",
    "leibniz",
    "trace",
];

#[derive(Deserialize)]
#[serde(untagged)]
enum RawTheta {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawMetric {
    Flat,
    Conformal { h: Vec<CoeffRecord> },
    General { g: Vec<Vec<Vec<CoeffRecord>>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(rename = "M")]
    m: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRational {
    p: i64,
    q: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: usize,
    theta: RawTheta,
    cutoff: i32,
    working_cutoff: Option<i32>,
    tol: Option<f64>,
    metric: RawMetric,
    grid: Option<RawGrid>,
    rational: Option<RawRational>,
    checks: Option<Vec<String>>,
    output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub enum MetricKind {
    Flat,
    /// `e^h δ_{jk}`
    Conformal(Element<f64>),
    General,
}

/// Command-line settings that override or extend the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub strict: bool,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub ctx: Arc<TorusContext<f64>>,
    pub kind: MetricKind,
    pub metric: Metric<f64>,
    pub grid_size: usize,
    pub rational: Option<(i64, usize)>,
    pub checks: Vec<String>,
    pub output: Option<PathBuf>,
}

impl JobConfig {
    pub fn conformal_h(&self) -> Option<&Element<f64>> {
        match &self.kind {
            MetricKind::Conformal(h) => Some(h),
            _ => None,
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn load_config(path: &Path, overrides: &Overrides) -> CliResult<JobConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, overrides)
}

pub fn parse_config(text: &str, overrides: &Overrides) -> CliResult<JobConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            config_err(format!("schema violation: {e}"))
        } else {
            config_err(format!("parse error: {e}"))
        }
    })?;
    validate(raw, overrides)
}

fn validate(raw: RawConfig, overrides: &Overrides) -> CliResult<JobConfig> {
    let n = raw.n;
    if n == 0 {
        return Err(config_err("n must be at least 1"));
    }
    let theta = match raw.theta {
        RawTheta::Scalar(t) if n == 2 => vec![vec![0.0, t], vec![0.0 - t, 0.0]],
        RawTheta::Scalar(_) => return Err(config_err("theta: a scalar theta requires n = 2")),
        RawTheta::Matrix(m) => {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(config_err(format!("theta: expected a {n}x{n} matrix")));
            }
            m
        }
    };
    if theta.iter().flatten().any(|x| !x.is_finite()) {
        return Err(config_err("theta: entries must be finite"));
    }
    for j in 0..n {
        for k in 0..n {
            if theta[j][k] != -theta[k][j] {
                return Err(config_err("theta not skew-symmetric"));
            }
        }
    }
    if raw.cutoff < 1 {
        return Err(config_err("cutoff must be at least 1"));
    }
    let working = raw.working_cutoff.unwrap_or(2 * raw.cutoff);
    if working < raw.cutoff {
        return Err(config_err("working_cutoff must be at least cutoff"));
    }
    let tol = overrides.tol.or(raw.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(config_err("tol must be positive"));
    }
    let ctx = TorusContext::builder(theta)
        .cutoff(raw.cutoff)
        .working_cutoff(working)
        .tol(tol)
        .strict(overrides.strict)
        .build()
        .map_err(|e| config_err(e.to_string()))?;

    let (kind, metric) = match raw.metric {
        RawMetric::Flat => (MetricKind::Flat, Metric::flat(&ctx)),
        RawMetric::Conformal { h } => {
            let h = element_in_cutoff(&ctx, &h, "h")?;
            let residual = h.self_adjoint_residual();
            if residual > tol {
                return Err(config_err(format!("h not self-adjoint (residual {residual:e})")));
            }
            let g = Metric::conformal(&h).map_err(|e| config_err(format!("h: {e}")))?;
            (MetricKind::Conformal(h), g)
        }
        RawMetric::General { g } => {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(config_err(format!("g: expected {n}x{n} entries")));
            }
            let rows = g
                .iter()
                .enumerate()
                .map(|(j, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(k, rec)| element_in_cutoff(&ctx, rec, &format!("g[{}][{}]", j + 1, k + 1)))
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()?;
            let metric = Metric::new(rows).map_err(|e| config_err(format!("g: {e}")))?;
            let report = metric.validate();
            if !report.exact_checks_pass() {
                let failed: Vec<String> =
                    report.failures().iter().filter(|c| !c.heuristic).map(|c| c.name.clone()).collect();
                return Err(config_err(format!("g: failed checks: {}", failed.join(", "))));
            }
            (MetricKind::General, metric)
        }
    };

    let grid_size = raw.grid.map_or(DEFAULT_GRID, |g| g.m);
    if grid_size < 2 {
        return Err(config_err("grid.M must be at least 2"));
    }
    let rational = match raw.rational {
        Some(r) => {
            nctorus::oracles::build_matrix_rep(r.p, r.q).map_err(|e| config_err(format!("rational: {e}")))?;
            Some((r.p, r.q))
        }
        None => None,
    };
    let checks = match raw.checks {
        Some(list) => {
            if let Some(bad) = list.iter().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
                return Err(config_err(format!("checks: unknown check '{bad}'")));
            }
            list
        }
        None => CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
    };
    Ok(JobConfig { ctx, kind, metric, grid_size, rational, checks, output: raw.output })
}

fn element_in_cutoff(ctx: &Arc<TorusContext<f64>>, records: &[CoeffRecord], field: &str) -> CliResult<Element<f64>> {
    let n = ctx.dim();
    for r in records {
        if r.m.len() != n {
            return Err(config_err(format!("{field}: index {:?} has length {}, expected {n}", r.m, r.m.len())));
        }
        if r.m.iter().any(|x| x.abs() > ctx.cutoff()) {
            return Err(config_err(format!("{field}: index {:?} outside the cutoff box", r.m)));
        }
    }
    Element::from_records(ctx, records).map_err(|e| config_err(format!("{field}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> CliResult<JobConfig> {
        parse_config(s, &Overrides::default())
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse(r#"{"n": 2, "theta": 0.3, "cutoff": 8, "metric": {"type": "flat"}}"#).unwrap();
        assert_eq!(cfg.ctx.working_cutoff(), 16);
        assert_eq!(cfg.ctx.tol(), 1e-9);
        assert_eq!(cfg.grid_size, 64);
        assert_eq!(cfg.checks.len(), CHECK_NAMES.len());
        assert!(!cfg.ctx.strict());
    }

    #[test]
    fn overrides_apply() {
        let o = Overrides { tol: Some(1e-11), strict: true };
        let cfg = parse_config(r#"{"n": 2, "theta": 0.3, "cutoff": 4, "tol": 1e-6, "metric": {"type": "flat"}}"#, &o)
            .unwrap();
        assert_eq!(cfg.ctx.tol(), 1e-11);
        assert!(cfg.ctx.strict());
    }

    #[test]
    fn rejections_name_the_field() {
        let cases = [
            (
                r#"{"n": 2, "theta": [[0.1, 0.3], [-0.3, 0]], "cutoff": 8, "metric": {"type": "flat"}}"#,
                "theta not skew-symmetric",
            ),
            (
                r#"{"n": 2, "theta": 0.3, "cutoff": 8, "metric": {"type": "conformal", "h": [{"m": [1, 0], "re": 0.3, "im": 0}]}}"#,
                "h not self-adjoint",
            ),
            (r#"{"n": 3, "theta": 0.3, "cutoff": 8, "metric": {"type": "flat"}}"#, "theta"),
            (r#"{"n": 2, "theta": 0.3, "metric": {"type": "flat"}}"#, "cutoff"),
            (
                r#"{"n": 2, "theta": 0.3, "cutoff": 8, "working_cutoff": 4, "metric": {"type": "flat"}}"#,
                "working_cutoff",
            ),
            (
                r#"{"n": 2, "theta": 0.3, "cutoff": 2, "metric": {"type": "conformal", "h": [{"m": [3, 0], "re": 0.3, "im": 0}]}}"#,
                "outside the cutoff",
            ),
            (r#"{"n": 2, "theta": 0.3, "cutoff": 8, "metric": {"type": "flat"}, "checks": ["curl"]}"#, "checks"),
            (
                r#"{"n": 2, "theta": 0.3, "cutoff": 8, "metric": {"type": "flat"}, "rational": {"p": 2, "q": 4}}"#,
                "rational",
            ),
            (r#"{"n": 2, "theta": 0.3, "cutoff": 8, "metric": {"type": "curved"}}"#, "schema"),
            (r#"{"n": 2, "theta": 0.3, "cutoff": 8, "metric": {"type": "flat"}, "colour": 1}"#, "colour"),
            (r#"{"n": 2, "theta": 0.3"#, "parse error"),
        ];
        for (text, needle) in cases {
            match parse(text) {
                Err(CliError::Config(msg)) => assert!(msg.contains(needle), "{msg} lacks {needle}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn general_metric_is_validated() {
        let asym = r#"{"n": 2, "theta": 0.3, "cutoff": 4, "metric": {"type": "general", "g": [
            [[{"m": [0, 0], "re": 2, "im": 0}], [{"m": [1, 0], "re": 0.1, "im": 0}, {"m": [-1, 0], "re": 0.1, "im": 0}]],
            [[], [{"m": [0, 0], "re": 2, "im": 0}]]]}}"#;
        match parse(asym) {
            Err(CliError::Config(msg)) => assert!(msg.contains("symmetric"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
