use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficients with modulus below this are discarded after every operation.
pub const DEFAULT_DROP_THRESHOLD: f64 = 1e-15;
pub const DEFAULT_TOL: f64 = 1e-9;

// Tables larger than this fall back to evaluating the phase directly.
const MAX_TABLE_HALF_WIDTH: i64 = 1 << 20;

/// Fourier exponent `m` of the normal-ordered monomial `U_1^{m_1} ... U_n^{m_n}`.
///
/// Ordering is lexicographic, which is also the serialization order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(m: impl Into<Vec<i32>>) -> Self {
        MultiIndex(m.into())
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn max_abs(&self) -> i32 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        MultiIndex(self.0.iter().map(|x| -x).collect())
    }

    pub fn into_vec(self) -> Vec<i32> {
        self.0
    }
}

impl Deref for MultiIndex {
    type Target = [i32];

    fn deref(&self) -> &[i32] {
        &self.0
    }
}

impl From<Vec<i32>> for MultiIndex {
    fn from(v: Vec<i32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[i32]> for MultiIndex {
    fn from(v: &[i32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `e^{2 pi i theta t}` for integer `t`, tabulated for one off-diagonal entry of theta.
#[derive(Clone, Debug)]
pub(crate) struct PhaseTable<T> {
    pub(crate) upper: usize,
    pub(crate) lower: usize,
    theta: T,
    half_width: i64,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> PhaseTable<T> {
    fn new(upper: usize, lower: usize, theta: T, half_width: i64) -> Self {
        let values = if half_width <= MAX_TABLE_HALF_WIDTH {
            (-half_width..=half_width).map(|t| unit_phase(theta, t)).collect()
        } else {
            Vec::new()
        };
        PhaseTable { upper, lower, theta, half_width, values }
    }

    #[inline]
    pub(crate) fn get(&self, t: i64) -> Complex<T> {
        if self.values.is_empty() || t.abs() > self.half_width {
            unit_phase(self.theta, t)
        } else {
            self.values[(t + self.half_width) as usize]
        }
    }
}

/// `e^{2 pi i theta t}` with the argument reduced mod 1 before scaling by `2 pi`.
pub(crate) fn unit_phase<T: Scalar>(theta: T, t: i64) -> Complex<T> {
    if t == 0 || theta == T::zero() {
        return Complex::new(T::one(), T::zero());
    }
    let x = theta * T::of(t as f64);
    let frac = x - x.round();
    let angle = T::TAU() * frac;
    Complex::new(angle.cos(), angle.sin())
}

/// Shared parameters of one noncommutative torus `A_Theta` and its truncation policy.
///
/// Elements hold an `Arc` to their context; operations on elements from
/// different contexts are rejected.
#[derive(Clone)]
pub struct TorusContext<T: Scalar> {
    n: usize,
    theta: Vec<T>,
    cutoff: i32,
    working_cutoff: i32,
    tol: T,
    drop_threshold: T,
    strict: bool,
    tables: Vec<PhaseTable<T>>,
}

impl<T: Scalar> PartialEq for TorusContext<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.theta == other.theta
            && self.cutoff == other.cutoff
            && self.working_cutoff == other.working_cutoff
            && self.tol == other.tol
            && self.drop_threshold == other.drop_threshold
            && self.strict == other.strict
    }
}

impl<T: Scalar> fmt::Debug for TorusContext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusContext")
            .field("n", &self.n)
            .field("theta", &self.theta)
            .field("cutoff", &self.cutoff)
            .field("working_cutoff", &self.working_cutoff)
            .field("tol", &self.tol)
            .field("strict", &self.strict)
            .finish()
    }
}

impl<T: Scalar> TorusContext<T> {
    /// Starts a builder from a full skew-symmetric theta matrix (rows of length n).
    pub fn builder(theta: Vec<Vec<T>>) -> ContextBuilder<T> {
        ContextBuilder {
            theta,
            cutoff: 8,
            working_cutoff: None,
            tol: T::of(DEFAULT_TOL),
            drop_threshold: T::of(DEFAULT_DROP_THRESHOLD),
            strict: false,
        }
    }

    /// The two-dimensional torus `A_theta` with `U_1 U_2 = e^{2 pi i theta} U_2 U_1`.
    pub fn two_dim(theta: T) -> ContextBuilder<T> {
        Self::builder(vec![vec![T::zero(), theta], vec![-theta, T::zero()]])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `Theta_{jk}` (0-based axes).
    pub fn theta(&self, j: usize, k: usize) -> T {
        self.theta[j * self.n + k]
    }

    pub fn theta_matrix(&self) -> Vec<Vec<T>> {
        self.theta.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn working_cutoff(&self) -> i32 {
        self.working_cutoff
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn drop_threshold(&self) -> T {
        self.drop_threshold
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn is_commutative(&self) -> bool {
        self.theta.iter().all(|&t| t == T::zero())
    }

    pub fn in_working_box(&self, m: &[i32]) -> bool {
        m.iter().all(|x| x.abs() <= self.working_cutoff)
    }

    /// Phase `phi(m, p)` with `U^m U^p = phi(m, p) U^{m+p}`.
    ///
    /// Normal ordering moves each `U_j^{p_j}` left past `U_k^{m_k}` for `k > j`,
    /// picking up `e^{2 pi i Theta_{kj} m_k p_j}` each time.
    pub fn product_phase(&self, m: &[i32], p: &[i32]) -> Complex<T> {
        let mut phase = Complex::new(T::one(), T::zero());
        for table in &self.tables {
            let t = m[table.upper] as i64 * p[table.lower] as i64;
            phase *= table.get(t);
        }
        phase
    }

    /// Phase `psi(m)` with `(U^m)^* = psi(m) U^{-m}`.
    ///
    /// `(U^m)^* = U_n^{-m_n} ... U_1^{-m_1}`; restoring normal order contributes
    /// `e^{2 pi i Theta_{kj} m_j m_k}` for every pair `j < k`.
    pub fn star_phase(&self, m: &[i32]) -> Complex<T> {
        let mut phase = Complex::new(T::one(), T::zero());
        for table in &self.tables {
            let t = m[table.upper] as i64 * m[table.lower] as i64;
            phase *= table.get(t);
        }
        phase
    }

    /// One table per axis pair `upper > lower` with nonzero `Theta_{upper,lower}`.
    pub(crate) fn phase_tables(&self) -> &[PhaseTable<T>] {
        &self.tables
    }

    pub(crate) fn check_axis(&self, j: usize) -> Result<()> {
        if j >= self.n {
            return Err(Error::AxisOutOfRange { axis: j, n: self.n });
        }
        Ok(())
    }
}

/// Builder for [`TorusContext`]; validates skew-symmetry and the cutoff ordering.
#[derive(Clone, Debug)]
pub struct ContextBuilder<T: Scalar> {
    theta: Vec<Vec<T>>,
    cutoff: i32,
    working_cutoff: Option<i32>,
    tol: T,
    drop_threshold: T,
    strict: bool,
}

impl<T: Scalar> ContextBuilder<T> {
    pub fn cutoff(mut self, cutoff: i32) -> Self {
        self.cutoff = cutoff;
        self
    }

    /// Defaults to twice the cutoff, so one product of cutoff-bounded elements never truncates.
    pub fn working_cutoff(mut self, working_cutoff: i32) -> Self {
        self.working_cutoff = Some(working_cutoff);
        self
    }

    pub fn tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn drop_threshold(mut self, drop_threshold: T) -> Self {
        self.drop_threshold = drop_threshold;
        self
    }

    /// In strict mode a product leaving the working box is an error instead of a projection.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn build(self) -> Result<Arc<TorusContext<T>>> {
        let n = self.theta.len();
        if n == 0 {
            return Err(Error::InvalidContext("dimension must be at least 1".into()));
        }
        if self.theta.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidContext("theta must be a square matrix".into()));
        }
        let eps = T::of(1e-12);
        for j in 0..n {
            if self.theta[j][j] != T::zero() {
                return Err(Error::InvalidContext("theta not skew-symmetric: nonzero diagonal".into()));
            }
            for k in 0..n {
                let (a, b) = (self.theta[j][k], self.theta[k][j]);
                if !a.is_finite() || (a + b).abs() > eps * (T::one() + a.abs()) {
                    return Err(Error::InvalidContext(format!("theta not skew-symmetric at ({}, {})", j + 1, k + 1)));
                }
            }
        }
        if self.cutoff < 1 {
            return Err(Error::InvalidContext("cutoff must be at least 1".into()));
        }
        let working_cutoff = self.working_cutoff.unwrap_or(2 * self.cutoff);
        if working_cutoff < self.cutoff {
            return Err(Error::InvalidContext("working_cutoff must be >= cutoff".into()));
        }
        if !(self.tol >= T::zero()) || !(self.drop_threshold >= T::zero()) {
            return Err(Error::InvalidContext("tolerances must be nonnegative".into()));
        }
        let half_width = working_cutoff as i64 * working_cutoff as i64;
        let mut tables = Vec::new();
        for upper in 0..n {
            for lower in 0..upper {
                let theta = self.theta[upper][lower];
                if theta != T::zero() {
                    tables.push(PhaseTable::new(upper, lower, theta, half_width));
                }
            }
        }
        Ok(Arc::new(TorusContext {
            n,
            theta: self.theta.into_iter().flatten().collect(),
            cutoff: self.cutoff,
            working_cutoff,
            tol: self.tol,
            drop_threshold: self.drop_threshold,
            strict: self.strict,
            tables,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let ctx = TorusContext::<f64>::two_dim(0.3).cutoff(8).build().unwrap();
        assert_eq!(ctx.dim(), 2);
        assert_eq!(ctx.working_cutoff(), 16);
        assert_eq!(ctx.tol(), 1e-9);
        assert_eq!(ctx.theta(0, 1), 0.3);
        assert_eq!(ctx.theta(1, 0), -0.3);
    }

    #[test]
    fn rejects_non_skew() {
        let err = TorusContext::builder(vec![vec![0.1, 0.3], vec![-0.3, 0.0]]).build().unwrap_err();
        assert!(err.to_string().contains("skew"));
        let err = TorusContext::builder(vec![vec![0.0, 0.3], vec![0.3, 0.0]]).build().unwrap_err();
        assert!(err.to_string().contains("skew"));
    }

    #[test]
    fn rejects_small_working_box() {
        let err = TorusContext::<f64>::two_dim(0.3).cutoff(8).working_cutoff(4).build().unwrap_err();
        assert!(matches!(err, Error::InvalidContext(_)));
    }

    #[test]
    fn two_dim_phase_matches_closed_form() {
        let theta = 0.3;
        let ctx = TorusContext::<f64>::two_dim(theta).build().unwrap();
        for (m, p) in [([0, 1], [1, 0]), ([3, -2], [-1, 5]), ([7, 7], [-7, 2])] {
            let got = ctx.product_phase(&m, &p);
            let want = Complex::from_polar(1.0, -std::f64::consts::TAU * theta * (m[1] * p[0]) as f64);
            assert!((got - want).norm() < 1e-13, "{m:?} {p:?}");
        }
    }

    #[test]
    fn phases_trivial_when_commutative() {
        let ctx = TorusContext::<f64>::two_dim(0.0).build().unwrap();
        assert!(ctx.is_commutative());
        assert_eq!(ctx.product_phase(&[3, 4], &[5, 6]), Complex::new(1.0, 0.0));
    }
}
