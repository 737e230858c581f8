//! Scalar abstraction shared by the analytic formulas and the dyad simulator.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Real floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Reduces an angle into `[0, 2π)`.
    fn wrap_angle(self) -> Self {
        let tau = Self::TAU();
        let r = self % tau;
        let r = if r < Self::zero() { r + tau } else { r };
        // `r + tau` can round up to exactly tau for tiny negative inputs.
        if r >= tau {
            Self::zero()
        } else {
            r
        }
    }

    /// Reduces an angle into `(-π, π]`.
    fn wrap_signed(self) -> Self {
        let w = self.wrap_angle();
        if w > Self::PI() {
            w - Self::TAU()
        } else {
            w
        }
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}
