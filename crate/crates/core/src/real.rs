//! Scalar abstraction for the real-valued length formulas.
//!
//! Every closed-form bound is written once against [`Real`] and evaluated in
//! `f64` by default; `f32` is supported for cross-precision checks.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Distance to an integer below which a value is treated as that integer
    /// before taking a ceiling.
    const CEIL_SLACK: f64;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite constant")
    }

    fn of_u64(x: u64) -> Self {
        Self::from_u64(x).expect("representable integer")
    }
}

impl Real for f64 {
    const CEIL_SLACK: f64 = 1e-9;
}

impl Real for f32 {
    const CEIL_SLACK: f64 = 1e-5;
}

/// Ceiling that absorbs representation error: a value within
/// [`Real::CEIL_SLACK`] of an integer maps to that integer.
pub fn ceil_nudged<F: Real>(value: F) -> F {
    let nearest = value.round();
    if (value - nearest).abs() <= F::of(F::CEIL_SLACK) {
        nearest
    } else {
        value.ceil()
    }
}

/// [`ceil_nudged`] converted to an integer; `None` when the value is not
/// finite or does not fit.
pub fn ceil_to_u64<F: Real>(value: F) -> Option<u64> {
    if !value.is_finite() {
        return None;
    }
    ceil_nudged(value).to_u64()
}

/// `ln(k!)` by direct summation.
pub fn ln_factorial<F: Real>(k: u64) -> F {
    (2..=k).fold(F::zero(), |acc, i| acc + F::of_u64(i).ln())
}

/// `1 / k!`, underflowing to zero for large `k`.
pub fn inv_factorial<F: Real>(k: u64) -> F {
    (2..=k).fold(F::one(), |acc, i| acc / F::of_u64(i))
}
