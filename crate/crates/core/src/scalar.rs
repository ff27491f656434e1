//! Scalar abstraction: every numerical routine in this crate is generic over
//! a floating-point type implementing [`Real`].

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Floating-point scalar (`f32` or `f64`).
///
/// All tolerances in this crate are quoted for `f64`; instantiating at `f32`
/// compiles and runs but cannot meet the documented accuracies.
pub trait Real:
    Float + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }

    /// Lossy conversion to `f64`, mainly for error reporting.
    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type Cplx<T> = Complex<T>;

/// Machine epsilon scaled by the magnitude of `x` (floored at 1).
#[inline]
pub fn eps_scaled<T: Real>(x: T) -> T {
    T::epsilon() * x.abs().max(T::one())
}
