//! Vector fields, derivations, metrics, the Levi-Civita connection and the
//! Riemann curvature tensor over a noncommutative torus.
//!
//! Axis indices are 0-based throughout the API.

mod connection;
mod curvature;
mod fields;
mod linalg;
mod metric;

pub use connection::{inverse_metric, levi_civita, levi_civita_report, levi_civita_rhs, Connection};
pub use curvature::{
    curvature_operator, curvature_tensor, gauss_bonnet, identity_residuals, CurvatureTensor, GaussBonnet,
    ResidualReport,
};
pub use fields::{Derivation, VectorField};
pub use linalg::{newton_schulz_inverse, AlgMatrix, InversionReport};
pub use metric::{CheckResult, CheckStatus, Metric, MetricReport};

pub(crate) use linalg::hermitian_eigenvalues;
