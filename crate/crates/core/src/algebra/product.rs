//! Twisted convolution.
//!
//! `U^m U^p = phi(m, p) U^{m+p}` with the phase coming from normal ordering.
//! Products are accumulated into a dense buffer over the bounding box of the
//! result whenever that box is small enough, otherwise into a sorted map.
//! Coefficients landing outside the working box are projected away (their ℓ1
//! mass is added to `tail`) or rejected in strict mode.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex;

use super::context::MultiIndex;
use super::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const DENSE_LIMIT: usize = 1 << 22;

struct Terms<'a, T> {
    index: Vec<&'a MultiIndex>,
    coeff: Vec<Complex<T>>,
    lo: Vec<i32>,
    hi: Vec<i32>,
}

impl<'a, T: Scalar> Terms<'a, T> {
    fn of(a: &'a Element<T>) -> Self {
        let n = a.dim();
        let mut lo = vec![i32::MAX; n];
        let mut hi = vec![i32::MIN; n];
        let mut index = Vec::with_capacity(a.coeffs.len());
        let mut coeff = Vec::with_capacity(a.coeffs.len());
        for (m, c) in &a.coeffs {
            for k in 0..n {
                lo[k] = lo[k].min(m[k]);
                hi[k] = hi[k].max(m[k]);
            }
            index.push(m);
            coeff.push(*c);
        }
        Terms { index, coeff, lo, hi }
    }
}

impl<T: Scalar> Element<T> {
    /// The product `a·b` in `A_Theta`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        // Commutative case: fix the operand order so that a·b and b·a run the
        // identical float computation.
        if self.ctx.is_commutative() && self.canonical_cmp(other) == Ordering::Greater {
            return other.twisted_convolution(self);
        }
        self.twisted_convolution(other)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.multiply(other)? - &other.multiply(self)?)
    }

    fn twisted_convolution(&self, other: &Self) -> Result<Self> {
        let ctx = &self.ctx;
        let n = ctx.dim();
        let propagated = self.tail * other.norm_l1() + self.norm_l1() * other.tail + self.tail * other.tail;
        if self.is_zero() || other.is_zero() {
            return Ok(Element { ctx: ctx.clone(), coeffs: BTreeMap::new(), tail: propagated });
        }
        let a = Terms::of(self);
        let b = Terms::of(other);

        let lo: Vec<i32> = (0..n).map(|k| a.lo[k] + b.lo[k]).collect();
        let hi: Vec<i32> = (0..n).map(|k| a.hi[k] + b.hi[k]).collect();
        let extent: Vec<usize> = (0..n).map(|k| (hi[k] - lo[k] + 1) as usize).collect();
        let volume = extent.iter().try_fold(1usize, |v, &e| v.checked_mul(e));

        let tables = ctx.phase_tables();
        let phase = |m: &MultiIndex, p: &MultiIndex| {
            let mut ph = Complex::new(T::one(), T::zero());
            for t in tables {
                ph *= t.get(m[t.upper] as i64 * p[t.lower] as i64);
            }
            ph
        };

        let mut raw: Vec<(Vec<i32>, Complex<T>)> = Vec::new();
        match volume {
            Some(volume) if volume <= DENSE_LIMIT => {
                // Row-major strides: increasing offset is lexicographic order.
                let mut stride = vec![1i64; n];
                for k in (0..n.saturating_sub(1)).rev() {
                    stride[k] = stride[k + 1] * extent[k + 1] as i64;
                }
                let lin = |m: &MultiIndex| -> i64 { (0..n).map(|k| m[k] as i64 * stride[k]).sum() };
                let base: i64 = (0..n).map(|k| lo[k] as i64 * stride[k]).sum();
                let a_lin: Vec<i64> = a.index.iter().map(|m| lin(m) - base).collect();
                let b_lin: Vec<i64> = b.index.iter().map(|m| lin(m)).collect();

                let mut buf = vec![Complex::<T>::default(); volume];
                for (i, ca) in a.coeff.iter().enumerate() {
                    let ma = a.index[i];
                    let off = a_lin[i];
                    if tables.is_empty() {
                        for (j, cb) in b.coeff.iter().enumerate() {
                            let slot = &mut buf[(off + b_lin[j]) as usize];
                            *slot += *ca * *cb;
                        }
                    } else {
                        for (j, cb) in b.coeff.iter().enumerate() {
                            let slot = &mut buf[(off + b_lin[j]) as usize];
                            *slot += *ca * *cb * phase(ma, b.index[j]);
                        }
                    }
                }
                let mut idx = lo.clone();
                for c in buf {
                    if c != Complex::default() {
                        raw.push((idx.clone(), c));
                    }
                    // advance the odometer
                    for k in (0..n).rev() {
                        idx[k] += 1;
                        if idx[k] <= hi[k] {
                            break;
                        }
                        idx[k] = lo[k];
                    }
                }
            }
            _ => {
                let mut acc: BTreeMap<Vec<i32>, Complex<T>> = BTreeMap::new();
                for (i, ca) in a.coeff.iter().enumerate() {
                    let ma = a.index[i];
                    for (j, cb) in b.coeff.iter().enumerate() {
                        let mb = b.index[j];
                        let r: Vec<i32> = (0..n).map(|k| ma[k] + mb[k]).collect();
                        let slot = acc.entry(r).or_default();
                        *slot += *ca * *cb * phase(ma, mb);
                    }
                }
                raw.extend(acc);
            }
        }

        let w = ctx.working_cutoff();
        let drop = ctx.drop_threshold();
        let mut removed = T::zero();
        let mut coeffs = BTreeMap::new();
        for (m, c) in raw {
            let size = c.norm();
            if size < drop {
                continue;
            }
            if m.iter().all(|x| x.abs() <= w) {
                coeffs.insert(MultiIndex::from(m), c);
            } else if ctx.strict() {
                return Err(Error::SupportOverflow { index: m, bound: w });
            } else {
                removed += size;
            }
        }
        Ok(Element { ctx: ctx.clone(), coeffs, tail: propagated + removed })
    }
}
