//! Small dense linear algebra: numeric `n×n` complex matrices and matrices
//! over the algebra, with Newton–Schulz inversion for the latter.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::algebra::{Element, TorusContext};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const NEWTON_SCHULZ_MAX_ITERATIONS: usize = 100;

pub(crate) fn invert_numeric<T: Scalar>(m: &[Vec<Complex<T>>]) -> Option<Vec<Vec<Complex<T>>>> {
    let n = m.len();
    let mut a: Vec<Vec<Complex<T>>> = m.to_vec();
    let mut inv: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex::new(T::one(), T::zero()) } else { Complex::default() }).collect())
        .collect();
    let scale = m.iter().flatten().fold(T::zero(), |s, c| s.max(c.norm()));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())?;
        if !(a[pivot][col].norm() > scale * T::epsilon() * T::of(n as f64)) {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv();
        for k in 0..n {
            a[col][k] *= p;
            inv[col][k] *= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != Complex::default() {
                    for k in 0..n {
                        let (ac, ic) = (a[col][k], inv[col][k]);
                        a[row][k] -= f * ac;
                        inv[row][k] -= f * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Eigenvalues of the hermitian part `(M + M^*)/2`, ascending.
pub(crate) fn hermitian_eigenvalues(m: &[Vec<Complex<f64>>]) -> Vec<f64> {
    let n = m.len();
    let mat = DMatrix::from_fn(n, n, |i, j| (m[i][j] + m[j][i].conj()) * 0.5);
    let mut ev: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Square matrix with entries in the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgMatrix<T: Scalar> {
    rows: Vec<Vec<Element<T>>>,
}

impl<T: Scalar> AlgMatrix<T> {
    pub fn new(rows: Vec<Vec<Element<T>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric("matrix must be square and nonempty".into()));
        }
        let first = &rows[0][0];
        if rows.iter().flatten().any(|e| !e.same_context(first)) {
            return Err(Error::ContextMismatch);
        }
        Ok(AlgMatrix { rows })
    }

    pub fn identity(ctx: &Arc<TorusContext<T>>, n: usize) -> Self {
        Self::from_numeric(
            ctx,
            &(0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Complex::new(T::one(), T::zero()) } else { Complex::default() })
                        .collect()
                })
                .collect::<Vec<Vec<_>>>(),
        )
    }

    /// Embeds a numeric matrix as constant elements.
    pub fn from_numeric(ctx: &Arc<TorusContext<T>>, m: &[Vec<Complex<T>>]) -> Self {
        AlgMatrix { rows: m.iter().map(|r| r.iter().map(|c| Element::scalar(ctx, *c)).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Element<T> {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Element<T>>] {
        &self.rows
    }

    pub fn context(&self) -> &Arc<TorusContext<T>> {
        self.rows[0][0].context()
    }

    /// Entrywise trace.
    pub fn trace_matrix(&self) -> Vec<Vec<Complex<T>>> {
        self.rows.iter().map(|r| r.iter().map(Element::trace).collect()).collect()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        let ctx = self.context();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = Element::zero(ctx);
                for k in 0..n {
                    acc = &acc + &self.rows[i][k].multiply(&other.rows[k][j])?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(AlgMatrix { rows })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale_real(&self, x: T) -> Self {
        AlgMatrix { rows: self.rows.iter().map(|r| r.iter().map(|e| e.scale_real(x)).collect()).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Element<T>, &Element<T>) -> Element<T>) -> Self {
        AlgMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }

    /// Max over rows of the summed entry ℓ1 norms; submultiplicative.
    pub fn block_norm(&self) -> T {
        self.rows.iter().map(|r| r.iter().fold(T::zero(), |s, e| s + e.norm_l1())).fold(T::zero(), T::max)
    }

    pub fn max_tail(&self) -> T {
        self.rows.iter().flatten().fold(T::zero(), |s, e| s.max(e.tail()))
    }
}

/// How a Newton–Schulz inversion went.
#[derive(Clone, Debug)]
pub struct InversionReport<T> {
    pub iterations: usize,
    /// `max(‖I - GX‖, ‖I - XG‖)` in the block norm, after each iteration (index 0 is the seed).
    pub residuals: Vec<T>,
    /// Whether the `tau(G)^{-1}` seed was replaced by `‖G‖^{-1} I`.
    pub fallback_seed: bool,
}

/// Inverts `G` by Newton–Schulz, `X ← X(2I − GX)`, seeded with the numeric
/// inverse of the entrywise trace `tau(G)`.
///
/// The residual `R = I − GX` squares each step. If the seed residual is not
/// below 1 the seed `I/‖G‖` is used instead, which converges for positive
/// `G` but may take a few steps before the ℓ1 residual drops below 1; from
/// then on it must decrease strictly. Once below `tol`, one more step is
/// taken if it lowers the residual further.
pub fn newton_schulz_inverse<T: Scalar>(g: &AlgMatrix<T>, tol: T) -> Result<(AlgMatrix<T>, InversionReport<T>)> {
    let n = g.dim();
    let ctx = g.context().clone();
    let id = AlgMatrix::identity(&ctx, n);
    let seed = invert_numeric(&g.trace_matrix())
        .ok_or_else(|| Error::InvalidMetric("trace matrix tau(G) is singular".into()))?;
    let mut x = AlgMatrix::from_numeric(&ctx, &seed);

    let residual = |x: &AlgMatrix<T>| -> Result<(AlgMatrix<T>, T)> {
        let right = id.sub(&g.multiply(x)?);
        let left = id.sub(&x.multiply(g)?);
        let r = right.block_norm().max(left.block_norm());
        Ok((right, r))
    };

    let (mut r, mut res) = residual(&x)?;
    let mut fallback_seed = false;
    if !(res < T::one()) {
        let norm = g.block_norm();
        x = id.scale_real(T::one() / norm);
        (r, res) = residual(&x)?;
        fallback_seed = true;
    }
    let mut residuals = vec![res];
    let mut iterations = 0;
    while !(res < tol) {
        if iterations >= NEWTON_SCHULZ_MAX_ITERATIONS {
            return Err(Error::MetricInversionFailed { iterations, residual: res.as_f64() });
        }
        // X(2I - GX) = X + X R
        x = x.add(&x.multiply(&r)?);
        iterations += 1;
        let (r_next, res_next) = residual(&x)?;
        let contracting = res < T::one();
        if !res_next.is_finite() || res_next > T::of(1e12) || (contracting && !(res_next < res)) {
            return Err(Error::MetricInversionFailed { iterations, residual: res_next.as_f64() });
        }
        r = r_next;
        res = res_next;
        residuals.push(res);
    }
    // One polishing step: the residual squares, so this reaches the rounding floor.
    if res > T::zero() {
        let polished = x.add(&x.multiply(&r)?);
        let (_, res_next) = residual(&polished)?;
        if res_next < res {
            x = polished;
            iterations += 1;
            residuals.push(res_next);
        }
    }
    let x = a_posteriori_tails(g, x, &id)?;
    Ok((x, InversionReport { iterations, residuals, fallback_seed }))
}

/// Replaces the propagated tails of a converged inverse by the bound
/// `‖G^{-1} − X‖ ≤ ‖X‖ ρ/(1 − ρ)` from `GX = I − R`, where `ρ` also counts the
/// mass the product `GX` dropped. Keeps the old tails where they are smaller.
fn a_posteriori_tails<T: Scalar>(g: &AlgMatrix<T>, x: AlgMatrix<T>, id: &AlgMatrix<T>) -> Result<AlgMatrix<T>> {
    let bare = AlgMatrix {
        rows: x
            .rows
            .iter()
            .map(|r| r.iter().map(|e| Element::from_map(e.context(), e.coeffs.clone(), T::zero())).collect())
            .collect(),
    };
    let gx = g.multiply(&bare)?;
    let r = id.sub(&gx);
    let rho =
        r.rows.iter().map(|row| row.iter().fold(T::zero(), |s, e| s + e.norm_l1() + e.tail())).fold(T::zero(), T::max);
    if !(rho < T::one()) {
        return Ok(x);
    }
    let bound = bare.block_norm() * rho / (T::one() - rho);
    let rows = x
        .rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|mut e| {
                    e.tail = e.tail.min(bound);
                    e
                })
                .collect()
        })
        .collect();
    Ok(AlgMatrix { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_inverse() {
        let m = vec![
            vec![Complex::new(2.0, 0.0), Complex::new(1.0, 1.0)],
            vec![Complex::new(1.0, -1.0), Complex::new(3.0, 0.0)],
        ];
        let inv = invert_numeric(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: Complex<f64> = (0..2).map(|k| m[i][k] * inv[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - Complex::new(want, 0.0)).norm() < 1e-14);
            }
        }
        let singular = vec![vec![Complex::new(1.0, 0.0); 2]; 2];
        assert!(invert_numeric(&singular).is_none());
    }

    #[test]
    fn eigenvalues_of_hermitian() {
        let m = vec![
            vec![Complex::new(2.0, 0.0), Complex::new(0.0, 1.0)],
            vec![Complex::new(0.0, -1.0), Complex::new(2.0, 0.0)],
        ];
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn newton_schulz_exact_for_constant_matrices() {
        let ctx = TorusContext::<f64>::two_dim(0.3).build().unwrap();
        let m = vec![
            vec![Complex::new(2.0, 0.0), Complex::new(0.5, 0.0)],
            vec![Complex::new(0.5, 0.0), Complex::new(1.0, 0.0)],
        ];
        let g = AlgMatrix::from_numeric(&ctx, &m);
        let (x, report) = newton_schulz_inverse(&g, 1e-12).unwrap();
        assert!(report.iterations <= 1);
        let prod = g.multiply(&x).unwrap();
        assert!(prod.sub(&AlgMatrix::identity(&ctx, 2)).block_norm() < 1e-14);
    }

    #[test]
    fn newton_schulz_fallback_seed() {
        // e^{cos}-like diagonal: the trace seed has residual > 1
        let ctx = TorusContext::<f64>::two_dim(0.3).cutoff(8).build().unwrap();
        let u = Element::generator(&ctx, 0).unwrap();
        let h = (&u + &u.star()).scale_real(0.6);
        let e = h.exp_sa().unwrap();
        let z = Element::zero(&ctx);
        let g = AlgMatrix::new(vec![vec![e.clone(), z.clone()], vec![z, e.clone()]]).unwrap();
        let (x, report) = newton_schulz_inverse(&g, 1e-11).unwrap();
        assert!(report.fallback_seed);
        let want = h.scale_real(-1.0).exp_sa().unwrap();
        assert!(x.get(0, 0).distance(&want) < 1e-10);
        assert!(x.get(0, 1).norm_l1() < 1e-12);
    }
}
