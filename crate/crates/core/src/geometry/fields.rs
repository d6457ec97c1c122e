use std::sync::Arc;

use num_complex::Complex;

use crate::algebra::{Element, TorusContext};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `sum_j a_j ∂_j`: an element of the free left module on `∂_1, ..., ∂_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T: Scalar> {
    coeffs: Vec<Element<T>>,
}

impl<T: Scalar> VectorField<T> {
    pub fn new(coeffs: Vec<Element<T>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Dimension { expected: 1, got: 0 });
        };
        if coeffs.len() != first.dim() {
            return Err(Error::Dimension { expected: first.dim(), got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.same_context(first)) {
            return Err(Error::ContextMismatch);
        }
        Ok(VectorField { coeffs })
    }

    pub fn zero(ctx: &Arc<TorusContext<T>>) -> Self {
        VectorField { coeffs: vec![Element::zero(ctx); ctx.dim()] }
    }

    /// `∂_k` (0-based).
    pub fn basis(ctx: &Arc<TorusContext<T>>, k: usize) -> Result<Self> {
        ctx.check_axis(k)?;
        Ok(Self::single(ctx, k, Element::one(ctx)))
    }

    /// `a ∂_k`.
    pub fn single(ctx: &Arc<TorusContext<T>>, k: usize, a: Element<T>) -> Self {
        let mut v = Self::zero(ctx);
        v.coeffs[k] = a;
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn context(&self) -> &Arc<TorusContext<T>> {
        self.coeffs[0].context()
    }

    pub fn coeff(&self, k: usize) -> &Element<T> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Element<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Element<T>> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Element::is_zero)
    }

    /// `X·a = sum_j a_j ∂_j(a)`.
    pub fn apply(&self, a: &Element<T>) -> Result<Element<T>> {
        let mut acc = Element::zero(a.context());
        for (j, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &c.multiply(&a.derive(j)?)?;
        }
        Ok(acc)
    }

    /// Left module action `a·X`.
    pub fn left_mul(&self, a: &Element<T>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| a.multiply(c)).collect::<Result<_>>()?;
        Ok(VectorField { coeffs })
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        VectorField { coeffs: self.coeffs.iter().map(|c| c.scale(lambda)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// Sum of the coefficient ℓ1 norms.
    pub fn norm_l1(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |s, c| s + c.norm_l1())
    }

    pub fn distance(&self, other: &Self) -> T {
        self.sub(other).norm_l1()
    }

    pub(crate) fn coeff_mut(&mut self, k: usize) -> &mut Element<T> {
        &mut self.coeffs[k]
    }
}

/// A derivation in the split form `sum_j c_j ∂_j + ad(a_0)` with constant
/// `c_j` and trace-free inner part `a_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<T: Scalar> {
    constant: Vec<Complex<T>>,
    inner: Element<T>,
}

impl<T: Scalar> Derivation<T> {
    /// The inner part is normalized to trace zero; `ad` ignores constants.
    pub fn new(constant: Vec<Complex<T>>, inner: Element<T>) -> Result<Self> {
        if constant.len() != inner.dim() {
            return Err(Error::Dimension { expected: inner.dim(), got: constant.len() });
        }
        Ok(Derivation { constant, inner: inner.trace_free() })
    }

    /// `∂_j` (0-based).
    pub fn basis(ctx: &Arc<TorusContext<T>>, j: usize) -> Result<Self> {
        ctx.check_axis(j)?;
        let mut constant = vec![Complex::default(); ctx.dim()];
        constant[j] = Complex::new(T::one(), T::zero());
        Ok(Derivation { constant, inner: Element::zero(ctx) })
    }

    /// `ad(a): x ↦ ax - xa`.
    pub fn inner(a: &Element<T>) -> Self {
        Derivation { constant: vec![Complex::default(); a.dim()], inner: a.trace_free() }
    }

    pub fn constant(&self) -> &[Complex<T>] {
        &self.constant
    }

    pub fn inner_part(&self) -> &Element<T> {
        &self.inner
    }

    pub fn context(&self) -> &Arc<TorusContext<T>> {
        self.inner.context()
    }

    pub fn dim(&self) -> usize {
        self.constant.len()
    }

    /// `X·a = sum_j c_j ∂_j(a) + [a_0, a]`.
    pub fn apply(&self, a: &Element<T>) -> Result<Element<T>> {
        self.inner.check_context(a)?;
        let mut acc = Element::zero(a.context());
        for (j, c) in self.constant.iter().enumerate() {
            if *c != Complex::default() {
                acc = &acc + &a.derive(j)?.scale(*c);
            }
        }
        if !self.inner.is_zero() {
            acc = &acc + &self.inner.commutator(a)?;
        }
        Ok(acc)
    }

    /// Commutator `[X, Y] = XY - YX` as operators.
    ///
    /// The constant parts commute, so the bracket is inner:
    /// `ad(X_c·y_0 - Y_c·x_0 + [x_0, y_0])` where `X_c` is the constant part of `X`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.inner.check_context(&other.inner)?;
        let ctx = self.context();
        let mut inner = self.inner.commutator(&other.inner)?;
        for j in 0..self.dim() {
            if self.constant[j] != Complex::default() {
                inner = &inner + &other.inner.derive(j)?.scale(self.constant[j]);
            }
            if other.constant[j] != Complex::default() {
                inner = &inner - &self.inner.derive(j)?.scale(other.constant[j]);
            }
        }
        debug_assert!(inner.trace().norm() <= ctx.tol() * (T::one() + inner.norm_l1()));
        Ok(Derivation { constant: vec![Complex::default(); self.dim()], inner: inner.trace_free() })
    }

    pub fn add(&self, other: &Self) -> Self {
        Derivation {
            constant: self.constant.iter().zip(&other.constant).map(|(a, b)| a + b).collect(),
            inner: &self.inner + &other.inner,
        }
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        Derivation { constant: self.constant.iter().map(|c| c * lambda).collect(), inner: self.inner.scale(lambda) }
    }
}
