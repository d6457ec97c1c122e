//! The smooth noncommutative torus: truncated Fourier elements with twisted
//! product, involution, the basic derivations and the canonical trace.

mod context;
mod element;
mod functional;
mod product;
pub mod sample;

pub use context::{ContextBuilder, MultiIndex, TorusContext, DEFAULT_DROP_THRESHOLD, DEFAULT_TOL};
pub use element::{CoeffRecord, Element};
pub use functional::ExpReport;
