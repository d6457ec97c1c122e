use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::fields::VectorField;
use super::linalg::{hermitian_eigenvalues, AlgMatrix};
use crate::algebra::{Element, TorusContext};
use crate::error::{Error, Result};
use crate::oracles::positivity_min_eigenvalue;
use crate::scalar::Scalar;

/// A Riemannian metric given by its matrix `g_{jk} = <∂_j, ∂_k>`.
///
/// Construction only checks shapes; [`Metric::validate`] reports on the
/// metric axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<T: Scalar> {
    g: AlgMatrix<T>,
}

impl<T: Scalar> Metric<T> {
    pub fn new(g: Vec<Vec<Element<T>>>) -> Result<Self> {
        let g = AlgMatrix::new(g)?;
        let n = g.context().dim();
        if g.dim() != n {
            return Err(Error::Dimension { expected: n, got: g.dim() });
        }
        Ok(Metric { g })
    }

    /// `<∂_j, ∂_k> = δ_{jk}`.
    pub fn flat(ctx: &Arc<TorusContext<T>>) -> Self {
        Metric { g: AlgMatrix::identity(ctx, ctx.dim()) }
    }

    /// `<∂_j, ∂_k> = e^h δ_{jk}` for self-adjoint `h`.
    pub fn conformal(h: &Element<T>) -> Result<Self> {
        let ctx = h.context();
        let e = h.exp_sa()?;
        let n = ctx.dim();
        let rows =
            (0..n).map(|j| (0..n).map(|k| if j == k { e.clone() } else { Element::zero(ctx) }).collect()).collect();
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn context(&self) -> &Arc<TorusContext<T>> {
        self.g.context()
    }

    pub fn entry(&self, j: usize, k: usize) -> &Element<T> {
        self.g.get(j, k)
    }

    pub fn matrix(&self) -> &AlgMatrix<T> {
        &self.g
    }

    /// `<X, Y> = sum_{j,k} X_j g_{jk} Y_k^*`.
    pub fn pairing(&self, x: &VectorField<T>, y: &VectorField<T>) -> Result<Element<T>> {
        let n = self.dim();
        if x.dim() != n || y.dim() != n {
            return Err(Error::Dimension { expected: n, got: x.dim().min(y.dim()) });
        }
        let ctx = self.context();
        let mut acc = Element::zero(ctx);
        for k in 0..n {
            let yk = y.coeff(k).star();
            if yk.is_zero() {
                continue;
            }
            let mut left = Element::zero(ctx);
            for j in 0..n {
                if !x.coeff(j).is_zero() {
                    left = &left + &x.coeff(j).multiply(self.entry(j, k))?;
                }
            }
            acc = &acc + &left.multiply(&yk)?;
        }
        Ok(acc)
    }

    /// `<X, ∂_m> = sum_j X_j g_{jm}`.
    pub fn pair_with_basis(&self, x: &VectorField<T>, m: usize) -> Result<Element<T>> {
        let mut acc = Element::zero(self.context());
        for j in 0..self.dim() {
            if !x.coeff(j).is_zero() {
                acc = &acc + &x.coeff(j).multiply(self.entry(j, m))?;
            }
        }
        Ok(acc)
    }

    /// `<∂_m, X> = sum_p g_{mp} X_p^*`.
    pub fn basis_pair_with(&self, m: usize, x: &VectorField<T>) -> Result<Element<T>> {
        let mut acc = Element::zero(self.context());
        for p in 0..self.dim() {
            if !x.coeff(p).is_zero() {
                acc = &acc + &self.entry(m, p).multiply(&x.coeff(p).star())?;
            }
        }
        Ok(acc)
    }

    /// Checks self-adjointness and symmetry of the entries, positive-definiteness
    /// of the trace matrix, and (heuristically) positivity via a finite matrix
    /// representation or grid evaluation.
    pub fn validate(&self) -> MetricReport {
        let n = self.dim();
        let tol = self.context().tol().as_f64();
        let mut checks = Vec::new();

        let mut sa = 0.0f64;
        let mut sym = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                sa = sa.max(self.entry(j, k).self_adjoint_residual().as_f64());
                sym = sym.max(self.entry(j, k).distance(self.entry(k, j)).as_f64());
            }
        }
        checks.push(CheckResult::bound("self_adjoint", sa, tol, false));
        checks.push(CheckResult::bound("symmetric", sym, tol, false));

        let tau: Vec<Vec<Complex<f64>>> = self
            .g
            .trace_matrix()
            .iter()
            .map(|r| r.iter().map(|c| Complex::new(c.re.as_f64(), c.im.as_f64())).collect())
            .collect();
        let min_ev = hermitian_eigenvalues(&tau)[0];
        checks.push(CheckResult {
            name: "trace_positive_definite".into(),
            status: if min_ev > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
            value: min_ev,
            heuristic: false,
        });

        let heuristic = match positivity_min_eigenvalue(self.g.rows()) {
            Some(ev) => CheckResult {
                name: "positivity".into(),
                status: if ev > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
                value: ev,
                heuristic: true,
            },
            None => CheckResult {
                name: "positivity".into(),
                status: CheckStatus::Skipped,
                value: f64::NAN,
                heuristic: true,
            },
        };
        checks.push(heuristic);
        MetricReport { checks }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    /// Residual norm, or smallest eigenvalue for the positivity checks.
    pub value: f64,
    pub heuristic: bool,
}

impl CheckResult {
    fn bound(name: &str, residual: f64, tol: f64, heuristic: bool) -> Self {
        let status = if residual <= tol { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckResult { name: name.into(), status, value: residual, heuristic }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub checks: Vec<CheckResult>,
}

impl MetricReport {
    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// All non-heuristic checks passed.
    pub fn exact_checks_pass(&self) -> bool {
        self.checks.iter().filter(|c| !c.heuristic).all(|c| c.status == CheckStatus::Pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).collect()
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.heuristic { " (heuristic)" } else { "" };
            writeln!(f, "{:<24} {:?}{} {:e}", c.name, c.status, tag, c.value)?;
        }
        Ok(())
    }
}
