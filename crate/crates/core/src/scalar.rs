//! Ordered-field abstraction shared by the game evaluators.
//!
//! Reach probabilities, payoffs and valuations are computed with the same
//! code over exact rationals, over the symbolic ε-field and over `f64`
//! (the multiplayer search runs in floating point and is re-checked
//! exactly).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a rational base.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A totally ordered field, closed under the four operations.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(r: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn positive(&self) -> bool {
        *self > Self::zero()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// Lossy conversion used for reporting only.
    fn approx_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn powu(&self, exp: u32) -> Self {
        rat_pow(self, exp)
    }
    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn powu(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
}

/// Exact rational value of a finite float (every finite `f64` is dyadic).
pub fn snap_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}
