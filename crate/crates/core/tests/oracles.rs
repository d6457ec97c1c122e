use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use nctorus::algebra::sample::{random_element, random_self_adjoint};
use nctorus::algebra::{Element, TorusContext};
use nctorus::geometry::{curvature_tensor, levi_civita, Metric};
use nctorus::oracles::*;
use nctorus::{Complex, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Ctx = Arc<TorusContext<f64>>;

fn ctx(theta: f64) -> Ctx {
    TorusContext::two_dim(theta).cutoff(8).working_cutoff(16).tol(1e-10).build().unwrap()
}

fn cos_h(ctx: &Ctx, a: f64, b: f64) -> Element<f64> {
    let r = |x| Complex::new(x, 0.0);
    Element::from_terms(ctx, vec![(vec![1, 0], r(a)), (vec![-1, 0], r(a)), (vec![0, 1], r(b)), (vec![0, -1], r(b))])
        .unwrap()
}

#[test]
fn grid_of_constants_and_cosines() {
    let ctx = ctx(0.0);
    let one = evaluate_grid(&Element::one(&ctx), 16).unwrap();
    assert!(one.samples().all(|(_, _, v)| v == Complex::new(1.0, 0.0)));
    let u = Element::generator(&ctx, 0).unwrap();
    let cos = evaluate_grid(&(&u + &u.star()), 16).unwrap();
    for (x1, _, v) in cos.samples() {
        assert!((v - Complex::new(2.0 * (2.0 * PI * x1).cos(), 0.0)).norm() < 1e-14);
    }
}

#[test]
fn grid_needs_commutative_plane() {
    assert!(matches!(evaluate_grid(&Element::one(&ctx(0.3)), 8), Err(Error::NotCommutative)));
    let c3 = TorusContext::<f64>::builder(vec![vec![0.0; 3]; 3]).build().unwrap();
    assert!(matches!(evaluate_grid(&Element::one(&c3), 8), Err(Error::Dimension { .. })));
}

#[test]
fn evaluation_is_a_homomorphism() {
    let ctx = ctx(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let a = random_element(&ctx, &mut rng, 4, 0.5, 1.0);
        let b = random_element(&ctx, &mut rng, 4, 0.5, 1.0);
        let ab = evaluate_grid(&a.multiply(&b).unwrap(), 32).unwrap();
        let pointwise = evaluate_grid(&a, 32).unwrap().zip_with(&evaluate_grid(&b, 32).unwrap(), |x, y| x * y);
        assert!(ab.max_abs_diff(&pointwise) < 1e-12);
    }
    let h = random_self_adjoint(&ctx, &mut rng, 3, 1.0);
    assert!(evaluate_grid(&h, 32).unwrap().max_imag() < 1e-14);
}

#[test]
fn classical_curvature_values() {
    let ctx = ctx(0.0);
    let zero = classical_curvature(&Element::zero(&ctx), 8).unwrap();
    assert!(zero.gaussian.samples().all(|(_, _, v)| v.norm() == 0.0));

    let k = classical_curvature(&cos_h(&ctx, 0.2, 0.0), 64).unwrap();
    let want = 0.8 * PI * PI * (-0.4f64).exp();
    assert!((k.gaussian.get(0, 0) - Complex::new(want, 0.0)).norm() < 1e-12);
    assert!(classical_curvature(&cos_h(&ctx, 0.2, 0.0).scale(Complex::new(0.0, 1.0)), 8).is_err());
}

#[test]
fn engine_matches_classical_curvature() {
    let ctx = ctx(0.0);
    let h = cos_h(&ctx, 0.2, 0.1);
    let g = Metric::conformal(&h).unwrap();
    let r = curvature_tensor(&levi_civita(&g).unwrap(), &g, false).unwrap();
    let engine = evaluate_grid(r.get(0, 1, 0, 1), DEFAULT_GRID_SIZE).unwrap();
    let oracle = classical_curvature(&h, DEFAULT_GRID_SIZE).unwrap();
    assert!(engine.max_abs_diff(&oracle.r1212) < 1e-6);
    // the classical Gauss-Bonnet integral
    assert!(oracle.gaussian.zip_with(&oracle.h, |k, h| k * h.exp()).mean().norm() < 1e-12);
}

#[test]
fn pauli_case() {
    let rep = build_matrix_rep(1, 2).unwrap();
    let c = |x: f64| Complex::new(x, 0.0);
    assert!(max_entry(&(&rep.u1 - DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]))) < 1e-15);
    assert_eq!(rep.u2, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
    assert!(max_entry(&(&rep.u1 * &rep.u2 + &rep.u2 * &rep.u1)) < 1e-15);
}

#[test]
fn clock_and_shift_relations() {
    for q in 2..=64usize {
        for p in 1..q as i64 {
            let Ok(rep) = build_matrix_rep(p, q) else { continue };
            assert!(rep.relation_residual() <= 1e-14, "{p}/{q}");
            let (a, b) = rep.unitarity_residuals();
            assert!(a <= 1e-14 && b <= 1e-14);
        }
    }
    assert!(build_matrix_rep(2, 4).is_err());
    assert!(build_matrix_rep(1, 1).is_err());
}

#[test]
fn represent_unit_and_mismatch() {
    let rep = build_matrix_rep(13, 64).unwrap();
    let ctx = ctx(13.0 / 64.0);
    assert_eq!(represent(&Element::one(&ctx), &rep).unwrap(), DMatrix::identity(64, 64));
    assert!(matches!(represent(&Element::one(&self::ctx(0.3)), &rep), Err(Error::ThetaMismatch { .. })));
    // theta is only defined mod 1
    let shifted = self::ctx(1.0 + 13.0 / 64.0);
    assert!(represent(&Element::one(&shifted), &rep).is_ok());
}

#[test]
fn represent_is_a_star_homomorphism() {
    let rep = build_matrix_rep(5, 17).unwrap();
    let ctx = ctx(5.0 / 17.0);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let a = random_element(&ctx, &mut rng, 4, 0.5, 1.0);
        let b = random_element(&ctx, &mut rng, 4, 0.5, 1.0);
        let (ra, rb) = (represent(&a, &rep).unwrap(), represent(&b, &rep).unwrap());
        let rab = represent(&a.multiply(&b).unwrap(), &rep).unwrap();
        assert!(max_entry(&(rab - &ra * &rb)) <= 1e-12);
        assert!(max_entry(&(represent(&a.star(), &rep).unwrap() - ra.adjoint())) <= 1e-12);
    }
}

#[test]
fn trace_correspondence() {
    let q = 17;
    let rep = build_matrix_rep(3, q).unwrap();
    let ctx = ctx(3.0 / 17.0);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let a = random_element(&ctx, &mut rng, 8, 0.5, 1.0);
        let tr = normalized_trace(&represent(&a, &rep).unwrap());
        assert!((tr - a.trace()).norm() < 1e-12);
    }
    // a nonzero multiple of q has full matrix trace
    let bad = Element::monomial(&ctx, &[0, 17], Complex::new(1.0, 0.0));
    if let Ok(bad) = bad {
        assert!((normalized_trace(&represent(&bad, &rep).unwrap()).norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn rational_approximants() {
    assert_eq!(rational_approximant(0.3, 34, 68), (3, 10));
    let (p, q) = rational_approximant(0.618_033_988_749_894_9, 34, 68);
    assert_eq!((p, q), (34, 55));
}

#[test]
fn positivity_of_exponentials() {
    for theta in [0.3, 0.618_033_988_749_894_9, 0.0] {
        let g = Metric::conformal(&cos_h(&ctx(theta), 0.3, 0.2)).unwrap();
        let ev = positivity_min_eigenvalue(g.matrix().rows()).unwrap();
        // ‖h‖₁ = 1 bounds the spectrum of e^h below by e^{-1}
        assert!(ev >= (-1.0f64).exp() - 1e-9, "theta {theta}: {ev}");
    }
    let ctx = ctx(0.3);
    let h = cos_h(&ctx, 0.6, 0.0);
    let indefinite =
        Metric::new(vec![vec![h.clone(), Element::zero(&ctx)], vec![Element::zero(&ctx), Element::one(&ctx)]]).unwrap();
    assert!(positivity_min_eigenvalue(indefinite.matrix().rows()).unwrap() < 0.0);
}

#[test]
fn closed_form_checks() {
    let ctx = ctx(0.3);
    assert!(conformal_closed_form(&Element::zero(&ctx)).unwrap().is_zero());
    let h = cos_h(&ctx, 0.3, 0.0);
    let r = conformal_closed_form(&h).unwrap();
    let gb = r.multiply(&h.scale_real(-1.0).exp_sa().unwrap()).unwrap().trace();
    assert!(gb.norm() <= 1e-8);
    assert!(conformal_closed_form(&cos_h(&ctx, 0.3, 0.0).scale(Complex::new(0.0, 1.0))).is_err());
}

#[test]
fn closed_form_agrees_with_solver_on_random_h() {
    let ctx = ctx(0.618_033_988_749_894_9);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..3 {
        let h = random_self_adjoint(&ctx, &mut rng, 1, 0.8);
        let g = Metric::conformal(&h).unwrap();
        let r = curvature_tensor(&levi_civita(&g).unwrap(), &g, true).unwrap();
        assert!(r.get(0, 1, 0, 1).distance(&conformal_closed_form(&h).unwrap()) < 1e-8);
    }
}
