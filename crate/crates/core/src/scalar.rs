//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
///
/// All algorithms are written against this trait. Tolerances quoted in the
/// documentation are meaningful for `f64`; `f32` runs the same code with
/// correspondingly looser accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts an index or count into the scalar type.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
