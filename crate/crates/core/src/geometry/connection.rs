use std::sync::Arc;

use num_complex::Complex;

use super::fields::{Derivation, VectorField};
use super::linalg::{newton_schulz_inverse, AlgMatrix, InversionReport};
use super::metric::Metric;
use crate::algebra::{Element, TorusContext};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A connection, stored through its Christoffel fields `Γ[j][k] = ∇_j ∂_k`.
///
/// Inner derivations act by left multiplication: `∇_{ad a} = a·` for `tau(a) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<T: Scalar> {
    christoffel: Vec<Vec<VectorField<T>>>,
}

impl<T: Scalar> Connection<T> {
    pub fn from_christoffel(christoffel: Vec<Vec<VectorField<T>>>) -> Result<Self> {
        let n = christoffel.len();
        if n == 0 || christoffel.iter().any(|r| r.len() != n) || christoffel.iter().flatten().any(|v| v.dim() != n) {
            return Err(Error::Dimension { expected: n, got: christoffel.first().map_or(0, Vec::len) });
        }
        Ok(Connection { christoffel })
    }

    /// The trivial connection `∇_j ∂_k = 0`.
    pub fn trivial(ctx: &Arc<TorusContext<T>>) -> Self {
        let n = ctx.dim();
        Connection { christoffel: vec![vec![VectorField::zero(ctx); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.christoffel.len()
    }

    pub fn context(&self) -> &Arc<TorusContext<T>> {
        self.christoffel[0][0].context()
    }

    /// `∇_j ∂_k` (0-based).
    pub fn christoffel(&self, j: usize, k: usize) -> &VectorField<T> {
        &self.christoffel[j][k]
    }

    pub fn christoffel_mut(&mut self, j: usize, k: usize) -> &mut VectorField<T> {
        &mut self.christoffel[j][k]
    }

    /// `∇_X Y = sum_k (X·b_k) ∂_k + sum_k b_k (sum_j c_j Γ[j][k] + a_0 ∂_k)`
    /// for `Y = sum_k b_k ∂_k` and `X = sum_j c_j ∂_j + ad(a_0)`.
    pub fn apply(&self, x: &Derivation<T>, y: &VectorField<T>) -> Result<VectorField<T>> {
        let n = self.dim();
        let ctx = self.context();
        // ∇_X ∂_k, independent of Y
        let mut out = VectorField::zero(ctx);
        for k in 0..n {
            let bk = y.coeff(k);
            let dk = x.apply(bk)?;
            if !dk.is_zero() {
                *out.coeff_mut(k) = out.coeff(k) + &dk;
            }
            if bk.is_zero() {
                continue;
            }
            for j in 0..n {
                let cj = x.constant()[j];
                if cj == Complex::default() {
                    continue;
                }
                let gamma = &self.christoffel[j][k];
                for p in 0..n {
                    if gamma.coeff(p).is_zero() {
                        continue;
                    }
                    let term = bk.multiply(gamma.coeff(p))?.scale(cj);
                    *out.coeff_mut(p) = out.coeff(p) + &term;
                }
            }
            if !x.inner_part().is_zero() {
                let term = bk.multiply(x.inner_part())?;
                *out.coeff_mut(k) = out.coeff(k) + &term;
            }
        }
        Ok(out)
    }

    /// `<∇_j ∂_k, ∂_l>`.
    pub fn lowered(&self, g: &Metric<T>, j: usize, k: usize, l: usize) -> Result<Element<T>> {
        g.pair_with_basis(&self.christoffel[j][k], l)
    }

    pub fn max_tail(&self) -> T {
        self.christoffel.iter().flatten().flat_map(|v| v.coeffs().iter().map(Element::tail)).fold(T::zero(), T::max)
    }
}

/// Right side of the Levi-Civita formula:
/// `½[∂_j g_{kl} + ∂_k g_{jl} - ∂_l g_{jk}]`.
pub fn levi_civita_rhs<T: Scalar>(g: &Metric<T>, j: usize, k: usize, l: usize) -> Result<Element<T>> {
    let a = g.entry(k, l).derive(j)?;
    let b = g.entry(j, l).derive(k)?;
    let c = g.entry(j, k).derive(l)?;
    Ok((&(&a + &b) - &c).scale_real(T::of(0.5)))
}

/// The Levi-Civita connection of `g`.
pub fn levi_civita<T: Scalar>(g: &Metric<T>) -> Result<Connection<T>> {
    Ok(levi_civita_report(g)?.0)
}

/// Solves `sum_p Γ[j][k]_p g_{pl} = B_{jk,l}` for each `(j, k)` by right
/// multiplication with `G^{-1}` from Newton–Schulz.
///
/// Fails on metrics whose entries are not self-adjoint and symmetric, or
/// whose trace matrix is not positive definite.
pub fn levi_civita_report<T: Scalar>(g: &Metric<T>) -> Result<(Connection<T>, InversionReport<T>)> {
    let report = g.validate();
    if !report.exact_checks_pass() {
        let failed: Vec<String> = report.failures().iter().filter(|c| !c.heuristic).map(|c| c.name.clone()).collect();
        return Err(Error::InvalidMetric(format!("failed checks: {}", failed.join(", "))));
    }
    let n = g.dim();
    let ctx = g.context().clone();
    let (inverse, inv_report) = newton_schulz_inverse(g.matrix(), ctx.tol())?;
    let mut christoffel = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            let rhs: Vec<Element<T>> = (0..n).map(|l| levi_civita_rhs(g, j, k, l)).collect::<Result<_>>()?;
            let coeffs = (0..n)
                .map(|p| {
                    let mut acc = Element::zero(&ctx);
                    for (l, b) in rhs.iter().enumerate() {
                        if !b.is_zero() {
                            acc = &acc + &b.multiply(inverse.get(l, p))?;
                        }
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(VectorField::new(coeffs)?);
        }
        christoffel.push(row);
    }
    Ok((Connection { christoffel }, inv_report))
}

/// `G^{-1}` of a metric, for callers that need it directly.
pub fn inverse_metric<T: Scalar>(g: &Metric<T>) -> Result<AlgMatrix<T>> {
    Ok(newton_schulz_inverse(g.matrix(), g.context().tol())?.0)
}
