//! Random elements for spot checks and property tests.

use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use super::context::TorusContext;
use super::element::Element;
use crate::scalar::Scalar;

/// Random element with support in `[-radius, radius]^n`, each coefficient
/// present with probability `density` and uniform in the square of half-side `scale`.
pub fn random_element<T: Scalar, R: Rng + ?Sized>(
    ctx: &Arc<TorusContext<T>>,
    rng: &mut R,
    radius: i32,
    density: f64,
    scale: f64,
) -> Element<T> {
    let n = ctx.dim();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(n as u32);
    let mut terms = Vec::new();
    for flat in 0..total {
        if rng.gen::<f64>() >= density {
            continue;
        }
        let mut rest = flat;
        let mut m = vec![0i32; n];
        for k in (0..n).rev() {
            m[k] = (rest % side) as i32 - radius;
            rest /= side;
        }
        let c = Complex::new(T::of(rng.gen_range(-scale..scale)), T::of(rng.gen_range(-scale..scale)));
        terms.push((m, c));
    }
    Element::from_terms(ctx, terms).expect("radius within the working box")
}

/// Random self-adjoint element `(a + a^*)/2`, rescaled to ℓ1 norm `norm`.
pub fn random_self_adjoint<T: Scalar, R: Rng + ?Sized>(
    ctx: &Arc<TorusContext<T>>,
    rng: &mut R,
    radius: i32,
    norm: f64,
) -> Element<T> {
    let a = random_element(ctx, rng, radius, 0.6, 1.0);
    let h = (&a + &a.star()).scale_real(T::of(0.5));
    let current = h.norm_l1();
    if current == T::zero() {
        return h;
    }
    let h = h.scale_real(T::of(norm) / current);
    // Symmetrize once more so that h = h^* holds to rounding.
    (&h + &h.star()).scale_real(T::of(0.5))
}
