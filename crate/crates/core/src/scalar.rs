//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the solvers are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the working precision.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an index or count.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Converts a signed integer.
    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    /// Relative tolerance, floored at a few ulps of the working precision.
    #[inline]
    fn tol(requested: f64) -> Self {
        let floor = 4.0 * Self::epsilon().to_f64().unwrap_or(f64::EPSILON);
        Self::lit(requested.max(floor))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Returns `Some(n)` when `x` is a non-positive integer `-n`.
pub fn nonpositive_integer<T: Real>(x: T) -> Option<u64> {
    if x <= T::zero() && x == x.round() && x > T::lit(-1.0e9) {
        (-x).to_u64()
    } else {
        None
    }
}

/// True when `x` is an integer (of any sign).
pub fn is_integer<T: Real>(x: T) -> bool {
    x.is_finite() && x == x.round()
}
