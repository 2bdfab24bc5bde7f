//! Scalar abstraction for the engine.
//!
//! Every algorithm in this crate is written against [`Real`], a thin bundle of
//! `num-traits` bounds satisfied by `f32` and `f64`. Double precision is the
//! intended production scalar (the crate root exports `*64` aliases); `f32`
//! exists for quick exploratory sweeps where attractor resolution does not
//! matter.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the engine can run on.
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + fmt::LowerExp + Send + Sync + 'static
{
    /// Converts a finite `f64` constant, rounding to the nearest representable value.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant converts to any Real")
    }

    /// Converts a count; saturates through `f64` for values beyond the mantissa.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| Self::of(n as f64))
    }

    /// Nearest `f64`, used when embedding scalar context into error values.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_convert_for_both_widths() {
        assert_eq!(f64::of(3.5699), 3.5699);
        assert_eq!(f32::of(0.25), 0.25_f32);
        assert_eq!(f64::of_usize(1000), 1000.0);
    }

    #[test]
    fn as_f64_round_trips() {
        assert_eq!(0.371_f64.as_f64(), 0.371);
        assert_eq!((0.5_f32).as_f64(), 0.5);
    }
}
