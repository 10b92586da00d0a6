//! Scalar abstraction: all numerics are generic over a floating-point type.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
///
/// Everything in this crate is generic over `Real`; the stated accuracy
/// targets assume `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal (coefficient tables, tolerances) into `T`.
#[inline]
pub(crate) fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Converts a small unsigned integer into `T`.
#[inline]
pub(crate) fn cast_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize must convert into the scalar type")
}
