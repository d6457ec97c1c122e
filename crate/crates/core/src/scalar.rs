//! Scalar abstraction for the engine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the algebra is built over: `f32` or `f64`.
///
/// Coefficients are `Complex<T>`. Oracle computations always run in `f64`
/// regardless of `T`, so `to_f64` / `from_f64` are the bridge.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
