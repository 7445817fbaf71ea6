//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar usable by the transforms and classifiers: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + rustfft::FftNum
    + Sum
    + Default
    + Display
    + LowerExp
    + FromStr
    + Serialize
    + DeserializeOwned
{
    /// Digits after the decimal point in `{:.*e}` formatting that make a
    /// text round trip lossless (17 significant digits for `f64`).
    const TEXT_DECIMALS: usize;

    /// Short name used in reports.
    const NAME: &'static str;

    /// Converts from `f64`, rounding to the nearest representable value.
    fn of(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 is representable in every Scalar")
    }

    /// Converts from a count.
    fn of_usize(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const TEXT_DECIMALS: usize = 8;
    const NAME: &'static str = "f32";
}

impl Scalar for f64 {
    const TEXT_DECIMALS: usize = 16;
    const NAME: &'static str = "f64";
}
