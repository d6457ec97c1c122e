//! Acceptance criteria, one PASS/FAIL line each. Scale: n = 2, cutoff 8,
//! working box 16, tol 1e-10.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use nctorus::algebra::sample::{random_element, random_self_adjoint};
use nctorus::algebra::{Element, TorusContext};
use nctorus::geometry::{
    curvature_operator, curvature_tensor, gauss_bonnet, identity_residuals, levi_civita, Connection, CurvatureTensor,
    Derivation, Metric, ResidualReport, VectorField,
};
use nctorus::oracles::{
    build_matrix_rep, classical_curvature, conformal_closed_form, evaluate_grid, max_entry, represent,
    DEFAULT_GRID_SIZE,
};
use nctorus::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Ctx = Arc<TorusContext<f64>>;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const AXIOM_TOL: f64 = 1e-12;
const REP_TOL: f64 = 1e-12;
const TORSION_TOL: f64 = 1e-12;
const GEOMETRY_TOL: f64 = 1e-8;
const GRID_TOL: f64 = 1e-6;
const NEGATIVE_CONTROL_MIN: f64 = 1e-4;
/// ‖R_{1,2,2,2}‖₁ from the reference run.
const NEGATIVE_CONTROL_FROZEN: f64 = 21.636_580_519_5;

fn ctx(theta: f64) -> Ctx {
    TorusContext::two_dim(theta).cutoff(8).working_cutoff(16).tol(1e-10).build().unwrap()
}

fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

fn cos_h(ctx: &Ctx, a: f64, b: f64) -> Element<f64> {
    Element::from_terms(ctx, vec![(vec![1, 0], c(a)), (vec![-1, 0], c(a)), (vec![0, 1], c(b)), (vec![0, -1], c(b))])
        .unwrap()
}

fn unit(ctx: &Ctx, rng: &mut ChaCha8Rng, radius: i32) -> Element<f64> {
    loop {
        let a = random_element(ctx, rng, radius, 0.5, 1.0);
        if !a.is_zero() {
            return a.scale_real(1.0 / a.norm_l1());
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Case {
    label: String,
    h: Option<Element<f64>>,
    metric: Metric<f64>,
    connection: Connection<f64>,
    tensor: CurvatureTensor<f64>,
    residuals: ResidualReport,
}

fn case(label: String, h: Option<Element<f64>>, metric: Metric<f64>) -> Case {
    let connection = levi_civita(&metric).unwrap();
    let tensor = curvature_tensor(&connection, &metric, true).unwrap();
    let residuals = identity_residuals(&connection, &metric, &tensor).unwrap();
    Case { label, h, metric, connection, tensor, residuals }
}

/// 20 conformal metrics `e^h δ` with random `‖h‖₁ ≤ 1`, then 5 metrics
/// `τ-positive constant + self-adjoint perturbation (‖·‖₁ ≤ 0.2)`.
fn family() -> Vec<Case> {
    let ctx = ctx(GOLDEN);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for i in 0..20 {
        let norm = rng.gen_range(0.2..=1.0);
        let h = random_self_adjoint(&ctx, &mut rng, 1 + (i % 2), norm);
        let g = Metric::conformal(&h).unwrap();
        out.push(case(format!("conformal #{i}"), Some(h), g));
    }
    for i in 0..5 {
        let (a, d, b) = (rng.gen_range(1.5..2.5), rng.gen_range(1.5..2.5), rng.gen_range(-0.3..0.3));
        let mut p = || random_self_adjoint(&ctx, &mut rng, 2, rng_norm(i));
        let (p11, p22, p12) = (p(), p(), p());
        let off = &Element::real(&ctx, b) + &p12;
        let g = Metric::new(vec![
            vec![&Element::real(&ctx, a) + &p11, off.clone()],
            vec![off, &Element::real(&ctx, d) + &p22],
        ])
        .unwrap();
        out.push(case(format!("general #{i}"), None, g));
    }
    out
}

fn rng_norm(i: usize) -> f64 {
    0.05 + 0.15 * (i as f64 / 4.0)
}

fn axioms() -> Outcome {
    let ctx = ctx(GOLDEN);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let one = Element::one(&ctx);
    let mut worst = [0.0f64; 9];
    let names = ["assoc", "unit", "star", "involution", "leibniz", "d-commute", "trace", "trace-d", "trace-aa*"];
    for _ in 0..200 {
        let (a, b, cc) = (unit(&ctx, &mut rng, 4), unit(&ctx, &mut rng, 4), unit(&ctx, &mut rng, 4));
        let ab = a.multiply(&b).unwrap();
        let r = [
            ab.multiply(&cc).unwrap().distance(&a.multiply(&b.multiply(&cc).unwrap()).unwrap()),
            one.multiply(&a).unwrap().distance(&a).max(a.multiply(&one).unwrap().distance(&a)),
            ab.star().distance(&b.star().multiply(&a.star()).unwrap()),
            a.star().star().distance(&a),
            (0..2)
                .map(|j| {
                    let rhs = &a.derive(j).unwrap().multiply(&b).unwrap() + &a.multiply(&b.derive(j).unwrap()).unwrap();
                    ab.derive(j).unwrap().distance(&rhs)
                })
                .fold(0.0, f64::max),
            a.derive(0).unwrap().derive(1).unwrap().distance(&a.derive(1).unwrap().derive(0).unwrap()),
            (ab.trace() - b.multiply(&a).unwrap().trace()).norm(),
            a.derive(0).unwrap().trace().norm().max(a.derive(1).unwrap().trace().norm()),
            (a.multiply(&a.star()).unwrap().trace().re - a.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>()).abs(),
        ];
        for (w, x) in worst.iter_mut().zip(r) {
            *w = w.max(x);
        }
    }
    // τ∘∂ must vanish exactly
    let pass = worst.iter().all(|w| *w <= AXIOM_TOL) && worst[7] == 0.0;
    let detail = names.iter().zip(worst).map(|(n, w)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", ");
    outcome(pass, format!("200 instances each; {detail}"))
}

fn star_homomorphism() -> Outcome {
    let rep = build_matrix_rep(13, 64).unwrap();
    let ctx = ctx(13.0 / 64.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut hom, mut star) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (a, b) = (unit(&ctx, &mut rng, 4), unit(&ctx, &mut rng, 4));
        let (ra, rb) = (represent(&a, &rep).unwrap(), represent(&b, &rep).unwrap());
        hom = hom.max(max_entry(&(represent(&a.multiply(&b).unwrap(), &rep).unwrap() - &ra * &rb)));
        star = star.max(max_entry(&(represent(&a.star(), &rep).unwrap() - ra.adjoint())));
    }
    outcome(hom.max(star) <= REP_TOL, format!("13/64, 100 pairs; product {hom:.1e}, star {star:.1e}"))
}

fn levi_civita_family(fam: &[Case]) -> Outcome {
    let torsion = fam.iter().map(|c| c.residuals.torsion).fold(0.0, f64::max);
    let compat = fam.iter().map(|c| c.residuals.compatibility).fold(0.0, f64::max);
    let sa = fam.iter().map(|c| c.residuals.self_adjointness).fold(0.0, f64::max);
    let pass = torsion <= TORSION_TOL && compat <= GEOMETRY_TOL && sa <= GEOMETRY_TOL;
    outcome(
        pass,
        format!("{} metrics; torsion {torsion:.1e}, compatibility {compat:.1e}, self-adjointness {sa:.1e}", fam.len()),
    )
}

fn curvature_identities(fam: &[Case]) -> Outcome {
    let bianchi = fam.iter().map(|c| c.residuals.bianchi).fold(0.0, f64::max);
    let anti = fam.iter().map(|c| c.residuals.antisymmetry).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut flat, mut tensorial) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let case = &fam[i % fam.len()];
        let ctx = case.metric.context();
        let derivation = |rng: &mut ChaCha8Rng| {
            let constant = vec![c(rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0))];
            Derivation::new(constant, unit(ctx, rng, 1)).unwrap()
        };
        let (x, y) = (derivation(&mut rng), derivation(&mut rng));
        let z = VectorField::new(vec![unit(ctx, &mut rng, 2), unit(ctx, &mut rng, 2)]).unwrap();
        let a = unit(ctx, &mut rng, 2);
        let inner = Derivation::inner(&unit(ctx, &mut rng, 2));
        flat = flat.max(curvature_operator(&case.connection, &inner, &y, &z).unwrap().norm_l1());
        let lhs = curvature_operator(&case.connection, &x, &y, &z.left_mul(&a).unwrap()).unwrap();
        let rhs = curvature_operator(&case.connection, &x, &y, &z).unwrap().left_mul(&a).unwrap();
        tensorial = tensorial.max(lhs.distance(&rhs));
    }
    let pass = bianchi.max(anti).max(flat).max(tensorial) <= GEOMETRY_TOL;
    outcome(
        pass,
        format!("Bianchi {bianchi:.1e}, antisymmetry {anti:.1e}; 50 instances: inner flatness {flat:.1e}, tensoriality {tensorial:.1e}"),
    )
}

fn closed_form(fam: &[Case], reference_case: &Case) -> Outcome {
    let mut worst = (0.0f64, String::new());
    let conformal = fam.iter().filter(|c| c.h.is_some()).take(10);
    for case in std::iter::once(reference_case).chain(conformal) {
        let d = case.tensor.get(0, 1, 0, 1).distance(&conformal_closed_form(case.h.as_ref().unwrap()).unwrap());
        if d >= worst.0 {
            worst = (d, case.label.clone());
        }
    }
    outcome(worst.0 <= GEOMETRY_TOL, format!("11 metrics; worst ℓ1 gap {:.1e} ({})", worst.0, worst.1))
}

fn gauss_bonnet_family(fam: &[Case], reference_case: &Case) -> Outcome {
    let mut worst = 0.0f64;
    for case in std::iter::once(reference_case).chain(fam.iter().filter(|c| c.h.is_some())) {
        let h = case.h.as_ref().unwrap();
        let weighted = case.tensor.get(0, 1, 0, 1).multiply(&h.scale_real(-1.0).exp_sa().unwrap()).unwrap();
        worst = worst.max(weighted.trace().norm());
    }
    let direct = gauss_bonnet(reference_case.h.as_ref().unwrap()).unwrap().value.norm();
    worst = worst.max(direct);
    outcome(worst <= GEOMETRY_TOL, format!("21 conformal metrics; max |tau(R1212 e^-h)| {worst:.1e}"))
}

fn commutative_limit() -> Outcome {
    let ctx = ctx(0.0);
    let h = cos_h(&ctx, 0.2, 0.1);
    let g = Metric::conformal(&h).unwrap();
    let r = curvature_tensor(&levi_civita(&g).unwrap(), &g, false).unwrap();
    let engine = evaluate_grid(r.get(0, 1, 0, 1), DEFAULT_GRID_SIZE).unwrap();
    let oracle = classical_curvature(&h, DEFAULT_GRID_SIZE).unwrap();
    let d = engine.max_abs_diff(&oracle.r1212);
    outcome(d <= GRID_TOL, format!("64x64 grid; max pointwise gap {d:.1e}"))
}

fn negative_control() -> Outcome {
    let ctx = ctx(GOLDEN);
    let g = Metric::conformal(&cos_h(&ctx, 0.3, 0.3)).unwrap();
    let r = curvature_tensor(&levi_civita(&g).unwrap(), &g, true).unwrap();
    let v = r.get(0, 1, 1, 1).norm_l1();
    let drift = (v - NEGATIVE_CONTROL_FROZEN).abs() / NEGATIVE_CONTROL_FROZEN;
    outcome(
        v >= NEGATIVE_CONTROL_MIN && drift < 1e-6,
        format!("‖R_1222‖₁ = {v:.10e} (frozen {NEGATIVE_CONTROL_FROZEN:e}, relative drift {drift:.1e})"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("conformal.json");
    std::fs::write(
        &cfg,
        r#"{"n": 2, "theta": 0.3, "cutoff": 8, "tol": 1e-10,
            "metric": {"type": "conformal", "h": [{"m": [-1, 0], "re": 0.3, "im": 0.0}, {"m": [1, 0], "re": 0.3, "im": 0.0}]}}"#,
    )
    .unwrap();
    let run = |name: &str, extra: &[&str]| -> Vec<u8> {
        let out = dir.path().join(name);
        let run = Command::new(env!("CARGO_BIN_EXE_nct"))
            .arg("curvature")
            .args(extra)
            .arg("--config")
            .arg(&cfg)
            .arg("--output")
            .arg(&out)
            .output()
            .unwrap();
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        std::fs::read(Path::new(&out).join("curvature.json")).unwrap()
    };
    let (a, b, p) = (run("a", &[]), run("b", &[]), run("p", &["--parallel"]));
    outcome(a == b && a == p, format!("{} bytes; rerun identical {}, --parallel identical {}", a.len(), a == b, a == p))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let family = family();
    let reference_case = {
        let h = cos_h(&ctx(0.3), 0.3, 0.0);
        case("theta 0.3, h = 0.3(U1 + U1*)".into(), Some(h.clone()), Metric::conformal(&h).unwrap())
    };
    println!("metric family built in {:.1?}", start.elapsed());

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("algebra axioms", Box::new(axioms)),
        ("phase conventions (*-homomorphism)", Box::new(star_homomorphism)),
        ("Levi-Civita correctness", Box::new(|| levi_civita_family(&family))),
        ("curvature identities", Box::new(|| curvature_identities(&family))),
        ("conformal closed form", Box::new(|| closed_form(&family, &reference_case))),
        ("Gauss-Bonnet", Box::new(|| gauss_bonnet_family(&family, &reference_case))),
        ("commutative limit", Box::new(commutative_limit)),
        ("negative control", Box::new(negative_control)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !result.pass {
            failed += 1;
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {name}: {} ({:.1?})", i + 1, result.detail, t.elapsed());
    }
    println!("acceptance: {}/{} criteria passed in {:.1?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
