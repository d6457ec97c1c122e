//! Functional calculus: exponential of self-adjoint elements and inversion.

use num_complex::Complex;

use super::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_TAYLOR_ORDER: usize = 40;
const MAX_NEUMANN_DOUBLINGS: usize = 64;

/// Outcome of [`Element::exp_sa_report`].
#[derive(Clone, Debug)]
pub struct ExpReport<T: Scalar> {
    pub value: Element<T>,
    /// Number of squarings `s`.
    pub squarings: u32,
    /// Taylor order `K` used for `e^{h / 2^s}`.
    pub order: usize,
    /// ℓ1 bound on the Taylor remainder, propagated through the squarings.
    pub remainder_bound: T,
    /// ℓ1 mass removed by projections (also stored as `value.tail()`).
    pub truncation: T,
    /// `‖e^h - (e^h)^*‖₁` of the result.
    pub self_adjoint_residual: T,
}

impl<T: Scalar> ExpReport<T> {
    pub fn error_bound(&self) -> T {
        self.remainder_bound + self.truncation
    }
}

impl<T: Scalar> Element<T> {
    /// `e^h` for self-adjoint `h`, see [`Element::exp_sa_report`].
    pub fn exp_sa(&self) -> Result<Self> {
        Ok(self.exp_sa_report()?.value)
    }

    /// `e^h` by scaling and squaring.
    ///
    /// Picks `s` with `‖h‖₁ / 2^s <= 1/2`, sums the Taylor series of
    /// `e^{h/2^s}` until the ℓ1 remainder bound drops below machine epsilon,
    /// then squares `s` times. Every product projects onto the working box;
    /// the removed mass must stay within the context tolerance.
    pub fn exp_sa_report(&self) -> Result<ExpReport<T>> {
        let tol = self.ctx.tol();
        let residual = self.self_adjoint_residual();
        if residual > tol {
            return Err(Error::NotSelfAdjoint { residual: residual.as_f64() });
        }
        let norm = self.norm_l1();
        let half = T::of(0.5);
        let mut squarings = 0u32;
        let mut scaled_norm = norm;
        while scaled_norm > half {
            scaled_norm *= half;
            squarings += 1;
        }
        let x = self.scale_real(T::one() / T::of(2f64.powi(squarings as i32)));

        // Remainder of the order-K Taylor polynomial:
        // sum_{k > K} r^k / k! <= r^{K+1} / (K+1)! / (1 - r / (K+2)).
        let target = T::epsilon();
        let mut order = 0usize;
        let mut term_bound = T::one();
        let remainder = loop {
            let next = term_bound * scaled_norm / T::of((order + 1) as f64);
            let bound = next / (T::one() - scaled_norm / T::of((order + 2) as f64));
            if bound <= target || order >= MAX_TAYLOR_ORDER {
                break bound;
            }
            order += 1;
            term_bound = next;
        };

        let one = Element::one(&self.ctx);
        let mut sum = one.clone();
        let mut term = one;
        for k in 1..=order {
            term = term.multiply(&x)?.scale_real(T::one() / T::of(k as f64));
            sum = &sum + &term;
        }
        let mut result = sum;
        for _ in 0..squarings {
            result = result.multiply(&result)?;
        }

        // If E = e^x + d then ‖E^{2^s} - e^h‖ <= 2^s ‖d‖ (e^{‖x‖} + ‖d‖)^{2^s - 1}.
        let reps = T::of(2f64.powi(squarings as i32));
        let remainder_bound = reps * remainder * (scaled_norm.exp() + remainder).powf(reps - T::one());

        let truncation = result.tail;
        if truncation > tol {
            return Err(Error::TruncationBudget { tail: truncation.as_f64(), budget: tol.as_f64() });
        }
        let self_adjoint_residual = result.self_adjoint_residual();
        Ok(ExpReport { value: result, squarings, order, remainder_bound, truncation, self_adjoint_residual })
    }

    /// Inverse by Neumann series around the trace.
    ///
    /// Writes `a = tau(a) (1 - r)` and requires `‖r‖₁ < 1`; the series
    /// `sum r^k` is summed through the product `(1 + r)(1 + r^2)(1 + r^4)...`.
    /// The result is checked on both sides against the context tolerance.
    pub fn invert(&self) -> Result<Self> {
        let ctx = self.ctx.clone();
        let tol = ctx.tol();
        let t = self.trace();
        if t == Complex::default() {
            return Err(Error::NotInvertible("trace is zero".into()));
        }
        let one = Element::one(&ctx);
        let r = &one - &self.scale(t.inv());
        let rn = r.norm_l1();
        if !(rn < T::one()) {
            return Err(Error::NotInvertible(format!("‖1 - a/tau(a)‖₁ = {} >= 1", rn.as_f64())));
        }
        let target = T::epsilon() * (T::one() - rn);
        let mut product = &one + &r;
        let mut power = r;
        for _ in 0..MAX_NEUMANN_DOUBLINGS {
            power = power.multiply(&power)?;
            let pn = power.norm_l1();
            if pn <= target {
                break;
            }
            product = product.multiply(&(&one + &power))?;
        }
        let inverse = product.scale(t.inv());
        let right = inverse.multiply(self)?.distance(&one);
        let left = self.multiply(&inverse)?.distance(&one);
        let residual = right.max(left);
        if residual > tol {
            return Err(Error::NotInvertible(format!(
                "residual {} exceeds tolerance after truncation",
                residual.as_f64()
            )));
        }
        Ok(inverse)
    }
}
