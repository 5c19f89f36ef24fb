//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type the link and optimizer math is generic over.
///
/// Implemented for `f32` and `f64`. Everything in the crate that is pure math
/// takes a `T: Scalar`; configuration loading and the sweep engine are
/// instantiated at `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Convergence target used by the iterative solvers (Lambert W, golden section).
    fn solver_tolerance() -> Self;
}

impl Scalar for f32 {
    fn solver_tolerance() -> Self {
        4.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn solver_tolerance() -> Self {
        1e-14
    }
}

/// Converts an `f64` literal into `T`.
///
/// Panics only if `T` cannot represent ordinary finite constants, which never
/// happens for the implemented types.
#[inline]
pub fn cst<T: Scalar>(value: f64) -> T {
    T::from_f64(value).expect("finite constant representable in scalar type")
}

/// Lossy conversion used for error messages and reports.
#[inline]
pub(crate) fn to_f64<T: Scalar>(value: T) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
