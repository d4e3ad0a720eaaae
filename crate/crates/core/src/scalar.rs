//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the numerics are generic over.
///
/// Implemented for `f32` and `f64`. Transcendental functions are required
/// throughout, so exact/rational scalars are not supported.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `(1 + v)/2 * log2(1 + v)` with `0 * log2(0) = 0`.
#[inline]
pub(crate) fn half_xlog2x<T: Real>(one_plus_v: T) -> T {
    if one_plus_v <= T::zero() {
        T::zero()
    } else {
        one_plus_v * one_plus_v.log2() / lit(2.0)
    }
}
