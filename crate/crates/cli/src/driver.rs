//! One function per subcommand. Each returns the files to write and a
//! one-line summary; check failures are reported after the files are written.

use nctorus::algebra::sample::random_element;
use nctorus::algebra::Element;
use nctorus::geometry::{
    curvature_tensor, gauss_bonnet, identity_residuals, levi_civita_report, CheckStatus, Connection, CurvatureTensor,
    VectorField,
};
use nctorus::oracles::{
    build_matrix_rep, classical_curvature, conformal_closed_form, max_entry, normalized_trace,
    positivity_min_eigenvalue, rational_approximant, represent, GridFunction,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::JobConfig;
use crate::error::{CliError, CliResult};
use crate::output::{element_json, fmt_f64, label, to_json, Outputs};

/// Seed for the algebra spot checks and the matrix-representation samples.
const SPOT_SEED: u64 = 0x6e63_7421;
const SPOT_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunFlags {
    pub parallel: bool,
    /// Adds `0.1 U_1` to `∇_1 ∂_2` before checking (test hook).
    pub inject_corruption: bool,
}

pub struct Report {
    pub outputs: Outputs,
    pub summary: String,
    /// Set when a check exceeded its threshold; the process exits with 1.
    pub failure: Option<String>,
}

fn engine<T>(r: nctorus::Result<T>) -> CliResult<T> {
    r.map_err(CliError::from_engine)
}

fn theta_json(cfg: &JobConfig) -> Value {
    json!(cfg.ctx.theta_matrix())
}

fn header(cfg: &JobConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), json!(cfg.ctx.dim()));
    m.insert("theta".into(), theta_json(cfg));
    m.insert("cutoff".into(), json!(cfg.ctx.cutoff()));
    m.insert("working_cutoff".into(), json!(cfg.ctx.working_cutoff()));
    m.insert("tol".into(), json!(cfg.ctx.tol()));
    m
}

struct Pipeline {
    connection: Connection<f64>,
    tensor: CurvatureTensor<f64>,
    iterations: usize,
    inversion_residual: f64,
}

fn pipeline(cfg: &JobConfig, flags: RunFlags) -> CliResult<Pipeline> {
    let (mut connection, report) = engine(levi_civita_report(&cfg.metric))?;
    if flags.inject_corruption {
        let u1 = engine(Element::generator(&cfg.ctx, 0))?.scale_real(0.1);
        let slot = connection.christoffel_mut(0, 1 % cfg.ctx.dim());
        *slot = slot.add(&VectorField::single(&cfg.ctx, 0, u1));
    }
    let tensor = engine(curvature_tensor(&connection, &cfg.metric, flags.parallel))?;
    Ok(Pipeline {
        connection,
        tensor,
        iterations: report.iterations,
        inversion_residual: report.residuals.last().copied().unwrap_or(0.0),
    })
}

pub fn run_curvature(cfg: &JobConfig, flags: RunFlags) -> CliResult<Report> {
    let p = pipeline(cfg, flags)?;
    let n = cfg.ctx.dim();
    let mut gamma = Map::new();
    for j in 0..n {
        for k in 0..n {
            for (q, e) in p.connection.christoffel(j, k).coeffs().iter().enumerate() {
                gamma.insert(label("Gamma", &[j, k, q]), element_json(e));
            }
        }
    }
    let mut r = Map::new();
    let mut norms = Map::new();
    let mut csv = String::from("component,norm,trace_re,trace_im\n");
    for (idx, e) in p.tensor.iter() {
        let name = label("R", &idx);
        let tr = e.trace();
        csv.push_str(&format!("{name},{},{},{}\n", fmt_f64(e.norm_l1()), fmt_f64(tr.re), fmt_f64(tr.im)));
        norms.insert(name.clone(), json!(e.norm_l1()));
        r.insert(name, element_json(e));
    }
    let tail = p.tensor.max_tail().max(p.connection.max_tail());
    let mut doc = header(cfg);
    doc.insert("metric_checks".into(), metric_checks(cfg));
    doc.insert("inversion".into(), json!({"iterations": p.iterations, "residual": p.inversion_residual}));
    doc.insert("Gamma".into(), Value::Object(gamma));
    doc.insert("R".into(), Value::Object(r));
    doc.insert("norms".into(), Value::Object(norms));
    doc.insert("truncation_tail".into(), json!(tail));

    let mut outputs = Outputs::default();
    outputs.add("curvature.json", to_json(&Value::Object(doc)));
    outputs.add("summary.csv", csv.into_bytes());
    let max_norm = p.tensor.iter().map(|(_, e)| e.norm_l1()).fold(0.0, f64::max);
    Ok(Report {
        outputs,
        summary: format!("curvature: max component norm {max_norm:e}, truncation tail {tail:e}"),
        failure: None,
    })
}

fn metric_checks(cfg: &JobConfig) -> Value {
    let report = cfg.metric.validate();
    let mut m = Map::new();
    for c in &report.checks {
        let status = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        };
        m.insert(c.name.clone(), json!({"status": status, "value": c.value, "heuristic": c.heuristic}));
    }
    Value::Object(m)
}

/// Worst residuals of the algebra axioms on seeded random elements.
fn algebra_spot_checks(cfg: &JobConfig) -> CliResult<Vec<(&'static str, f64)>> {
    let ctx = &cfg.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_SEED);
    // three factors must fit the working box
    let radius = (ctx.working_cutoff() / 3).clamp(1, 3).min(ctx.cutoff());
    let (mut assoc, mut star, mut leibniz, mut trace) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..SPOT_SAMPLES {
        let a = random_element(ctx, &mut rng, radius, 0.5, 1.0);
        let b = random_element(ctx, &mut rng, radius, 0.5, 1.0);
        let c = random_element(ctx, &mut rng, radius, 0.5, 1.0);
        let ab = engine(a.multiply(&b))?;
        let ba = engine(b.multiply(&a))?;
        assoc = assoc.max(engine(ab.multiply(&c))?.distance(&engine(a.multiply(&engine(b.multiply(&c))?))?));
        star = star.max(ab.star().distance(&engine(b.star().multiply(&a.star()))?));
        for j in 0..ctx.dim() {
            let lhs = engine(ab.derive(j))?;
            let rhs = &engine(engine(a.derive(j))?.multiply(&b))? + &engine(a.multiply(&engine(b.derive(j))?))?;
            leibniz = leibniz.max(lhs.distance(&rhs));
        }
        trace = trace.max((ab.trace() - ba.trace()).norm());
    }
    Ok(vec![("associativity", assoc), ("star", star), ("leibniz", leibniz), ("trace", trace)])
}

pub fn run_checks(cfg: &JobConfig, flags: RunFlags) -> CliResult<Report> {
    let p = pipeline(cfg, flags)?;
    let residuals = engine(identity_residuals(&p.connection, &cfg.metric, &p.tensor))?;
    let mut all: Vec<(&str, f64)> = residuals.entries().to_vec();
    all.extend(algebra_spot_checks(cfg)?);
    let threshold = 10.0 * cfg.ctx.tol();

    let selected: Vec<(&str, f64)> = all.into_iter().filter(|(name, _)| cfg.checks.iter().any(|c| c == name)).collect();
    let mut failing: Vec<(&str, f64)> = selected.iter().copied().filter(|e| !(e.1 <= threshold)).collect();
    failing.sort_by(|a, b| b.1.total_cmp(&a.1));
    let worst = failing.first().copied();
    let mut res = Map::new();
    for (name, v) in &selected {
        res.insert(name.to_string(), json!(v));
    }
    let mut doc = header(cfg);
    doc.insert("threshold".into(), json!(threshold));
    doc.insert("residuals".into(), Value::Object(res));
    doc.insert("pass".into(), json!(worst.is_none()));
    doc.insert("worst".into(), worst.map_or(Value::Null, |w| json!(w.0)));
    let mut outputs = Outputs::default();
    outputs.add("residuals.json", to_json(&Value::Object(doc)));
    let max = selected.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(Report {
        outputs,
        summary: format!("check: {} residuals, max {max:e}, threshold {threshold:e}", selected.len()),
        failure: (!failing.is_empty()).then(|| {
            let list: Vec<String> = failing.iter().map(|(name, v)| format!("{name} = {v:e}")).collect();
            format!("residuals above {threshold:e}: {}", list.join(", "))
        }),
    })
}

fn require_conformal(cfg: &JobConfig, what: &str) -> CliResult<Element<f64>> {
    if cfg.ctx.dim() != 2 {
        return Err(CliError::Config(format!("{what} requires n = 2")));
    }
    match &cfg.kind {
        crate::config::MetricKind::Conformal(h) => Ok(h.clone()),
        crate::config::MetricKind::Flat => Ok(Element::zero(&cfg.ctx)),
        crate::config::MetricKind::General => Err(CliError::Config(format!("{what} requires conformal metric"))),
    }
}

pub fn run_gauss_bonnet(cfg: &JobConfig) -> CliResult<Report> {
    let h = require_conformal(cfg, "gauss-bonnet")?;
    let gb = engine(gauss_bonnet(&h))?;
    let budget = 10.0 * cfg.ctx.tol();
    let abs = gb.value.norm();
    let mut doc = header(cfg);
    doc.insert("value".into(), json!({"re": gb.value.re, "im": gb.value.im}));
    doc.insert("abs".into(), json!(abs));
    doc.insert("budget".into(), json!(budget));
    doc.insert("truncation_tail".into(), json!(gb.truncation));
    let mut failure = (abs > budget).then(|| format!("gauss-bonnet |value| {abs:e} exceeds budget {budget:e}"));
    if cfg.ctx.is_commutative() {
        let classical = engine(classical_curvature(&h, cfg.grid_size))?;
        let integral = classical.gaussian.zip_with(&classical.h, |k, h| k * h.exp()).mean();
        doc.insert("classical_integral".into(), json!({"re": integral.re, "im": integral.im, "grid": cfg.grid_size}));
        if failure.is_none() && (integral - gb.value).norm() > budget {
            failure = Some(format!("classical integral {integral} disagrees with {}", gb.value));
        }
    }
    doc.insert("pass".into(), json!(failure.is_none()));
    let mut outputs = Outputs::default();
    outputs.add("gauss_bonnet.json", to_json(&Value::Object(doc)));
    Ok(Report {
        outputs,
        summary: format!("gauss-bonnet: {:e} {:+e}i (budget {budget:e})", gb.value.re, gb.value.im),
        failure,
    })
}

fn grid_csv(g: &GridFunction) -> Vec<u8> {
    let mut s = String::from("x1,x2,re,im\n");
    for (x1, x2, v) in g.samples() {
        s.push_str(&format!("{},{},{},{}\n", fmt_f64(x1), fmt_f64(x2), fmt_f64(v.re), fmt_f64(v.im)));
    }
    s.into_bytes()
}

pub fn run_oracle_classical(cfg: &JobConfig) -> CliResult<Report> {
    let h = require_conformal(cfg, "oracle classical")?;
    if !cfg.ctx.is_commutative() {
        return Err(CliError::Config("oracle classical requires theta = 0".into()));
    }
    let c = engine(classical_curvature(&h, cfg.grid_size))?;
    let mut outputs = Outputs::default();
    outputs.add("grid.csv", grid_csv(&c.r1212));
    outputs.add("gaussian_grid.csv", grid_csv(&c.gaussian));
    Ok(Report {
        outputs,
        summary: format!("oracle classical: {0}x{0} grid of R[1][2][1][2] and K", cfg.grid_size),
        failure: None,
    })
}

pub fn run_oracle_matrix_rep(cfg: &JobConfig) -> CliResult<Report> {
    if cfg.ctx.dim() != 2 {
        return Err(CliError::Config("oracle matrix-rep requires n = 2".into()));
    }
    let theta = cfg.ctx.theta(0, 1);
    let (p, q) = match cfg.rational {
        Some(r) => r,
        None => {
            let (p, q) = rational_approximant(theta, 2, 64);
            let d = theta - p as f64 / q as f64;
            if (d - d.round()).abs() > 1e-12 {
                return Err(CliError::Config("rational: theta is not p/q with q <= 64; give rational {p, q}".into()));
            }
            (p, q)
        }
    };
    let rep = build_matrix_rep(p, q).map_err(|e| CliError::Config(format!("rational: {e}")))?;
    let (u1, u2) = rep.unitarity_residuals();
    let ctx = &cfg.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_SEED);
    let radius = (ctx.working_cutoff() / 2).clamp(1, 4).min(ctx.cutoff());
    let (mut hom, mut star, mut trace) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..SPOT_SAMPLES {
        let a = random_element(ctx, &mut rng, radius, 0.5, 1.0);
        let b = random_element(ctx, &mut rng, radius, 0.5, 1.0);
        let ra = engine(represent(&a, &rep))?;
        let rb = engine(represent(&b, &rep))?;
        let rab = engine(represent(&engine(a.multiply(&b))?, &rep))?;
        hom = hom.max(max_entry(&(rab - &ra * &rb)));
        star = star.max(max_entry(&(engine(represent(&a.star(), &rep))? - ra.adjoint())));
        if 2 * radius < q as i32 {
            trace = trace.max((normalized_trace(&ra) - a.trace()).norm());
        }
    }
    let mut doc = header(cfg);
    doc.insert("p".into(), json!(p));
    doc.insert("q".into(), json!(q));
    let mut res = Map::new();
    res.insert("relation".into(), json!(rep.relation_residual()));
    res.insert("unitarity_u1".into(), json!(u1));
    res.insert("unitarity_u2".into(), json!(u2));
    res.insert("homomorphism".into(), json!(hom));
    res.insert("star_homomorphism".into(), json!(star));
    res.insert("trace".into(), json!(trace));
    if let Some(ev) = positivity_min_eigenvalue(cfg.metric.matrix().rows()) {
        res.insert("metric_min_eigenvalue".into(), json!(ev));
    }
    let threshold = 1e-10;
    let worst = ["relation", "unitarity_u1", "unitarity_u2", "homomorphism", "star_homomorphism", "trace"]
        .into_iter()
        .map(|k| (k, res[k].as_f64().unwrap_or(f64::INFINITY)))
        .fold(("", 0.0), |a, b| if b.1 > a.1 { b } else { a });
    doc.insert("residuals".into(), Value::Object(res));
    let mut outputs = Outputs::default();
    outputs.add("matrix_rep.json", to_json(&Value::Object(doc)));
    Ok(Report {
        outputs,
        summary: format!("oracle matrix-rep at {p}/{q}: worst residual {} = {:e}", worst.0, worst.1),
        failure: (worst.1 > threshold).then(|| format!("{} residual {:e} exceeds {threshold:e}", worst.0, worst.1)),
    })
}

pub fn run_oracle_closed_form(cfg: &JobConfig) -> CliResult<Report> {
    let h = require_conformal(cfg, "oracle conformal-closed-form")?;
    let r = engine(conformal_closed_form(&h))?;
    let name = label("R", &[0, 1, 0, 1]);
    let mut doc = header(cfg);
    let mut comp = Map::new();
    comp.insert(name.clone(), element_json(&r));
    doc.insert("R".into(), Value::Object(comp));
    let mut norms = Map::new();
    norms.insert(name, json!(r.norm_l1()));
    doc.insert("norms".into(), Value::Object(norms));
    doc.insert("truncation_tail".into(), json!(r.tail()));
    let mut outputs = Outputs::default();
    outputs.add("closed_form.json", to_json(&Value::Object(doc)));
    Ok(Report {
        outputs,
        summary: format!("oracle conformal-closed-form: |R[1][2][1][2]| = {:e}", r.norm_l1()),
        failure: None,
    })
}
