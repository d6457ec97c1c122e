//! Riemannian geometry on noncommutative tori.
//!
//! The [`algebra`] module implements the smooth algebra `A_Theta` on truncated
//! Fourier series, [`geometry`] builds metrics, the Levi-Civita connection and
//! the Riemann curvature tensor on top of it, and [`oracles`] provides
//! independent checks: commutative grid evaluation, clock-and-shift matrix
//! representations at rational theta, and the closed-form curvature of
//! conformal metrics on the 2-torus.
//!
//! Everything is generic over the real scalar type ([`Scalar`]); the `*64`
//! aliases below fix it to `f64`.

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod oracles;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type TorusContext64 = algebra::TorusContext<f64>;
pub type Element64 = algebra::Element<f64>;
pub type Element32 = algebra::Element<f32>;
pub type VectorField64 = geometry::VectorField<f64>;
pub type Derivation64 = geometry::Derivation<f64>;
pub type Metric64 = geometry::Metric<f64>;
pub type Connection64 = geometry::Connection<f64>;
pub type CurvatureTensor64 = geometry::CurvatureTensor<f64>;
