//! Scalar abstraction: the numeric kernels are generic over the floating
//! point type, with `f64` as the working default (see the aliases at the
//! crate root). All stated tolerances are calibrated for `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Sum + Debug + Display + 'static {}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}
