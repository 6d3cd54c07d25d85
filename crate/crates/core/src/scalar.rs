//! Floating-point abstraction shared by the numerical kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real scalar usable by the kernels: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Sum + Debug + Display + Default
{
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn f64(self) -> f64 {
        self.to_f64().expect("representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
