//! Scalar abstraction for the symbolic parameter layer.
//!
//! Parameter-list rewrites are written once over [`Scalar`] and run either
//! on `f64` (numeric path) or on [`BigRational`] (exact structural checks).

use std::fmt::Debug;
use std::ops::Neg;

use num::{BigRational, Num, ToPrimitive};

use crate::sum::exact_sum;

pub trait Scalar: Clone + Debug + PartialOrd + Num + Neg<Output = Self> {
    fn from_i64(v: i64) -> Self;
    fn floor(&self) -> Self;
    fn to_f64(&self) -> f64;

    /// Sum that is exact for rationals and correctly rounded for floats.
    fn sum_all(items: Vec<Self>) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sum_all(items: Vec<Self>) -> Self {
        exact_sum(items)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Builds the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}
