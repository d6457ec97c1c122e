use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::context::{MultiIndex, TorusContext};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finitely supported Fourier series `sum_m c_m U^m` in the smooth algebra.
///
/// Coefficients are kept in lexicographic order of `m`. `tail` is the ℓ1 mass
/// discarded by box projections while this value was computed, propagated
/// through products and linear combinations.
#[derive(Clone)]
pub struct Element<T: Scalar> {
    pub(crate) ctx: Arc<TorusContext<T>>,
    pub(crate) coeffs: BTreeMap<MultiIndex, Complex<T>>,
    pub(crate) tail: T,
}

/// One coefficient in the JSON element format `{"m": [...], "re": x, "im": y}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub m: Vec<i32>,
    pub re: f64,
    pub im: f64,
}

impl<T: Scalar> Element<T> {
    pub fn zero(ctx: &Arc<TorusContext<T>>) -> Self {
        Element { ctx: ctx.clone(), coeffs: BTreeMap::new(), tail: T::zero() }
    }

    pub fn one(ctx: &Arc<TorusContext<T>>) -> Self {
        Self::scalar(ctx, Complex::new(T::one(), T::zero()))
    }

    pub fn scalar(ctx: &Arc<TorusContext<T>>, c: Complex<T>) -> Self {
        let mut e = Self::zero(ctx);
        e.insert(MultiIndex::zero(ctx.dim()), c);
        e
    }

    pub fn real(ctx: &Arc<TorusContext<T>>, x: T) -> Self {
        Self::scalar(ctx, Complex::new(x, T::zero()))
    }

    /// `c U^m`; indices outside the working box are a support overflow.
    pub fn monomial(ctx: &Arc<TorusContext<T>>, m: &[i32], c: Complex<T>) -> Result<Self> {
        if m.len() != ctx.dim() {
            return Err(Error::Dimension { expected: ctx.dim(), got: m.len() });
        }
        if !ctx.in_working_box(m) {
            return Err(Error::SupportOverflow { index: m.to_vec(), bound: ctx.working_cutoff() });
        }
        let mut e = Self::zero(ctx);
        e.insert(MultiIndex::from(m), c);
        Ok(e)
    }

    /// The generator `U_j` (0-based axis).
    pub fn generator(ctx: &Arc<TorusContext<T>>, j: usize) -> Result<Self> {
        ctx.check_axis(j)?;
        let mut m = vec![0; ctx.dim()];
        m[j] = 1;
        Self::monomial(ctx, &m, Complex::new(T::one(), T::zero()))
    }

    /// Builds an element from `(m, c)` pairs; repeated indices are summed.
    pub fn from_terms<I>(ctx: &Arc<TorusContext<T>>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Complex<T>)>,
    {
        let mut acc: BTreeMap<MultiIndex, Complex<T>> = BTreeMap::new();
        for (m, c) in terms {
            if m.len() != ctx.dim() {
                return Err(Error::Dimension { expected: ctx.dim(), got: m.len() });
            }
            if !ctx.in_working_box(&m) {
                return Err(Error::SupportOverflow { index: m, bound: ctx.working_cutoff() });
            }
            *acc.entry(MultiIndex::from(m)).or_default() += c;
        }
        let mut e = Self::zero(ctx);
        for (m, c) in acc {
            e.insert(m, c);
        }
        Ok(e)
    }

    pub(crate) fn from_map(ctx: &Arc<TorusContext<T>>, coeffs: BTreeMap<MultiIndex, Complex<T>>, tail: T) -> Self {
        let drop = ctx.drop_threshold();
        let coeffs = coeffs.into_iter().filter(|(_, c)| !(c.norm() < drop)).collect();
        Element { ctx: ctx.clone(), coeffs, tail }
    }

    fn insert(&mut self, m: MultiIndex, c: Complex<T>) {
        if c.norm() < self.ctx.drop_threshold() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }

    pub fn context(&self) -> &Arc<TorusContext<T>> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn coeff(&self, m: &[i32]) -> Complex<T> {
        self.coeffs.get(&MultiIndex::from(m)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex<T>)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|m_j|` over the support (0 for the zero element).
    pub fn support_radius(&self) -> i32 {
        self.coeffs.keys().map(MultiIndex::max_abs).max().unwrap_or(0)
    }

    pub fn tail(&self) -> T {
        self.tail
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    pub(crate) fn check_context(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// `sum_i lambda_i a_i`. All elements must share one context.
    pub fn linear_combine(terms: &[(Complex<T>, &Element<T>)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Malformed("linear_combine needs at least one term".into()));
        };
        let mut acc: BTreeMap<MultiIndex, Complex<T>> = BTreeMap::new();
        let mut tail = T::zero();
        for (lambda, a) in terms {
            first.check_context(a)?;
            for (m, c) in &a.coeffs {
                *acc.entry(m.clone()).or_default() += *lambda * *c;
            }
            tail += lambda.norm() * a.tail;
        }
        Ok(Self::from_map(&first.ctx, acc, tail))
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, c)| (m.clone(), *c * lambda)).collect();
        Self::from_map(&self.ctx, coeffs, lambda.norm() * self.tail)
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    /// The involution: `(c U^m)^* = conj(c) psi(m) U^{-m}`.
    pub fn star(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, c)| (m.neg(), c.conj() * self.ctx.star_phase(m))).collect();
        Self::from_map(&self.ctx, coeffs, self.tail)
    }

    /// `∂_j`: multiplies the coefficient at `m` by `2 pi i m_j` (0-based axis).
    pub fn derive(&self, j: usize) -> Result<Self> {
        self.ctx.check_axis(j)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let k = T::TAU() * T::of(m[j] as f64);
                (m.clone(), Complex::new(-k * c.im, k * c.re))
            })
            .collect();
        Ok(Self::from_map(&self.ctx, coeffs, self.tail))
    }

    /// The canonical trace: the constant Fourier coefficient.
    pub fn trace(&self) -> Complex<T> {
        self.coeffs.get(&MultiIndex::zero(self.dim())).copied().unwrap_or_default()
    }

    pub fn norm_l1(&self) -> T {
        self.coeffs.values().fold(T::zero(), |s, c| s + c.norm())
    }

    /// Largest coefficient modulus.
    pub fn norm_sup(&self) -> T {
        self.coeffs.values().fold(T::zero(), |s, c| s.max(c.norm()))
    }

    /// Zeroes every coefficient outside `[-radius, radius]^n` and returns the removed ℓ1 mass.
    pub fn project(&self, radius: i32) -> (Self, T) {
        let mut kept = BTreeMap::new();
        let mut removed = T::zero();
        for (m, c) in &self.coeffs {
            if m.max_abs() <= radius {
                kept.insert(m.clone(), *c);
            } else {
                removed += c.norm();
            }
        }
        (Element { ctx: self.ctx.clone(), coeffs: kept, tail: self.tail + removed }, removed)
    }

    /// `‖a - a*‖₁`.
    pub fn self_adjoint_residual(&self) -> T {
        (self - &self.star()).norm_l1()
    }

    /// Same element with the constant mode removed, so that its trace is zero.
    pub fn trace_free(&self) -> Self {
        let mut e = self.clone();
        e.coeffs.remove(&MultiIndex::zero(self.dim()));
        e
    }

    /// ℓ1 distance `‖a - b‖₁`.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).norm_l1()
    }

    pub fn to_records(&self) -> Vec<CoeffRecord> {
        self.coeffs.iter().map(|(m, c)| CoeffRecord { m: m.to_vec(), re: c.re.as_f64(), im: c.im.as_f64() }).collect()
    }

    /// Parses the JSON record form. Every index must lie in the working box and
    /// appear at most once.
    pub fn from_records(ctx: &Arc<TorusContext<T>>, records: &[CoeffRecord]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for r in records {
            if !seen.insert(r.m.clone()) {
                return Err(Error::Malformed(format!("duplicate index {:?}", r.m)));
            }
            if !(r.re.is_finite() && r.im.is_finite()) {
                return Err(Error::Malformed(format!("non-finite coefficient at {:?}", r.m)));
            }
        }
        Self::from_terms(ctx, records.iter().map(|r| (r.m.clone(), Complex::new(T::of(r.re), T::of(r.im)))))
    }

    /// Total order on coefficient data, used to canonicalize operand order
    /// for commutative products.
    pub(crate) fn canonical_cmp(&self, other: &Self) -> Ordering {
        let mut a = self.coeffs.iter();
        let mut b = other.coeffs.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let ord = ma
                        .cmp(mb)
                        .then(ca.re.partial_cmp(&cb.re).unwrap_or(Ordering::Equal))
                        .then(ca.im.partial_cmp(&cb.im).unwrap_or(Ordering::Equal));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl<T: Scalar> PartialEq for Element<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.coeffs == other.coeffs
    }
}

impl<T: Scalar> fmt::Debug for Element<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

fn combine<T: Scalar>(a: &Element<T>, b: &Element<T>, sign: T) -> Element<T> {
    assert!(a.same_context(b), "element arithmetic across different contexts");
    let mut acc = a.coeffs.clone();
    for (m, c) in &b.coeffs {
        let e = acc.entry(m.clone()).or_default();
        *e += c.scale(sign);
    }
    Element::from_map(&a.ctx, acc, a.tail + b.tail)
}

/// Panics if the operands live in different contexts; use
/// [`Element::linear_combine`] for the checked form.
impl<T: Scalar> Add for &Element<T> {
    type Output = Element<T>;

    fn add(self, rhs: &Element<T>) -> Element<T> {
        combine(self, rhs, T::one())
    }
}

impl<T: Scalar> Sub for &Element<T> {
    type Output = Element<T>;

    fn sub(self, rhs: &Element<T>) -> Element<T> {
        combine(self, rhs, -T::one())
    }
}

impl<T: Scalar> Neg for &Element<T> {
    type Output = Element<T>;

    fn neg(self) -> Element<T> {
        let coeffs = self.coeffs.iter().map(|(m, c)| (m.clone(), -*c)).collect();
        Element { ctx: self.ctx.clone(), coeffs, tail: self.tail }
    }
}

impl<T: Scalar> Add for Element<T> {
    type Output = Element<T>;

    fn add(self, rhs: Element<T>) -> Element<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Element<T> {
    type Output = Element<T>;

    fn sub(self, rhs: Element<T>) -> Element<T> {
        &self - &rhs
    }
}
