use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

type C64 = Complex<f64>;

/// Clock and shift matrices realizing `U_1 U_2 = e^{2 pi i p/q} U_2 U_1`.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub p: i64,
    pub q: usize,
    /// `diag(1, ω, ..., ω^{q−1})`, `ω = e^{2 pi i p/q}`
    pub u1: DMatrix<C64>,
    /// Cyclic shift `e_j ↦ e_{j+1}`
    pub u2: DMatrix<C64>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn build_matrix_rep(p: i64, q: usize) -> Result<MatrixRep> {
    if q < 2 {
        return Err(Error::InvalidRepresentation(format!("q must be at least 2, got {q}")));
    }
    if gcd(p.rem_euclid(q as i64), q as i64) != 1 {
        return Err(Error::InvalidRepresentation(format!("gcd({p}, {q}) != 1")));
    }
    let omega = |k: i64| Complex::from_polar(1.0, TAU * ((p * k).rem_euclid(q as i64)) as f64 / q as f64);
    let u1 = DMatrix::from_fn(q, q, |i, j| if i == j { omega(i as i64) } else { C64::default() });
    let u2 = DMatrix::from_fn(q, q, |i, j| if i == (j + 1) % q { C64::new(1.0, 0.0) } else { C64::default() });
    Ok(MatrixRep { p, q, u1, u2 })
}

impl MatrixRep {
    pub fn theta(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// Max-entry norm of `U1 U2 − e^{2 pi i p/q} U2 U1`.
    pub fn relation_residual(&self) -> f64 {
        let phase = Complex::from_polar(1.0, TAU * self.theta());
        let d = &self.u1 * &self.u2 - (&self.u2 * &self.u1) * phase;
        max_entry(&d)
    }

    /// Max-entry norms of `U^* U − I` for both generators.
    pub fn unitarity_residuals(&self) -> (f64, f64) {
        let id = DMatrix::<C64>::identity(self.q, self.q);
        (max_entry(&(self.u1.adjoint() * &self.u1 - &id)), max_entry(&(self.u2.adjoint() * &self.u2 - &id)))
    }
}

pub fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Image of `a` under the representation; rejects contexts whose theta is not `p/q` mod 1.
pub fn represent<T: Scalar>(a: &Element<T>, rep: &MatrixRep) -> Result<DMatrix<C64>> {
    if a.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: a.dim() });
    }
    let theta = a.context().theta(0, 1).as_f64();
    let diff = theta - rep.theta();
    if (diff - diff.round()).abs() > 1e-12 {
        return Err(Error::ThetaMismatch { context: theta, p: rep.p, q: rep.q as i64 });
    }
    Ok(represent_unchecked(a, rep))
}

/// `sum_m c_m U1^{m_1} U2^{m_2}` without checking theta.
pub(crate) fn represent_unchecked<T: Scalar>(a: &Element<T>, rep: &MatrixRep) -> DMatrix<C64> {
    let q = rep.q as i64;
    let mut out = DMatrix::<C64>::zeros(rep.q, rep.q);
    for (m, c) in a.iter() {
        let c = C64::new(c.re.as_f64(), c.im.as_f64());
        let shift = (m[1] as i64).rem_euclid(q);
        for j in 0..q {
            let row = (j + shift) % q;
            let k = (m[0] as i64 * row * rep.p).rem_euclid(q);
            out[(row as usize, j as usize)] += c * Complex::from_polar(1.0, TAU * k as f64 / q as f64);
        }
    }
    out
}

/// `tr(M)/q`.
pub fn normalized_trace(m: &DMatrix<C64>) -> C64 {
    m.trace() / (m.nrows() as f64)
}

/// Best coprime `p/q` to `theta` (mod 1) with `q` in `[min_q, max_q]`, or an
/// exact smaller denominator when theta is such a rational.
pub fn rational_approximant(theta: f64, min_q: usize, max_q: usize) -> (i64, usize) {
    let frac = theta - theta.floor();
    for q in 2..min_q {
        let p = (frac * q as f64).round() as i64;
        if (frac - p as f64 / q as f64).abs() < 1e-12 && gcd(p, q as i64) == 1 {
            return (p, q);
        }
    }
    let mut best = (1, min_q.max(2));
    let mut best_err = f64::INFINITY;
    for q in min_q.max(2)..=max_q.max(min_q.max(2)) {
        let p = (frac * q as f64).round() as i64;
        if gcd(p, q as i64) != 1 {
            continue;
        }
        let err = (frac - p as f64 / q as f64).abs();
        if err < best_err {
            best = (p, q);
            best_err = err;
        }
    }
    best
}
