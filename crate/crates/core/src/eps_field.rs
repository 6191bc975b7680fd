//! Polynomials and rational functions in an infinitesimal `ε > 0`.
//!
//! Values are ordered by their behaviour as `ε → 0⁺`: the sign of a
//! polynomial is the sign of its lowest-order nonzero coefficient. This is
//! the field in which the perturbed LCP and LP are pivoted.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{fmt_rational, Rational, Scalar};

/// Largest degree an [`EpsRat`] numerator or denominator may reach.
pub const DEGREE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational function has a pole at ε = 0")]
    PoleAtZero,
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
}

/// Polynomial in ε with ascending rational coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsPoly {
    coeffs: Vec<Rational>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(crate::scalar::int(n))
    }

    /// `c · ε^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// `ε^k`.
    pub fn eps_pow(k: usize) -> Self {
        Self::monomial(Rational::one(), k)
    }

    /// `ε^lo + ε^(lo+1) + … + ε^hi`; zero when `lo > hi`.
    pub fn eps_range(lo: usize, hi: usize) -> Self {
        if lo > hi {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); hi + 1];
        for c in &mut coeffs[lo..=hi] {
            *c = Rational::one();
        }
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EpsPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest-order nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    /// Sign of the polynomial for all sufficiently small `ε > 0`.
    pub fn sign(&self) -> i8 {
        match self.order() {
            None => 0,
            Some(k) if self.coeffs[k].is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Exact value at a rational `ε₀` (Horner).
    pub fn eval(&self, eps: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * eps + c;
        }
        acc
    }

    pub fn eval_f64(&self, eps: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * eps + c.approx_f64();
        }
        acc
    }

    fn leading(&self) -> &Rational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Euclidean division by degree: `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &EpsPoly) -> Result<(EpsPoly, EpsPoly), EpsError> {
        if d.is_zero() {
            return Err(EpsError::DivisionByZero);
        }
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((EpsPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((EpsPoly::from_coeffs(quot), EpsPoly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(a: &EpsPoly, b: &EpsPoly) -> EpsPoly {
        let mut a = a.monic();
        let mut b = b.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }
}

impl Ord for EpsPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl PartialOrd for EpsPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        EpsPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            })
            .collect();
        EpsPoly::from_coeffs(coeffs)
    }
}

impl<'a> Mul<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        EpsPoly::from_coeffs(coeffs)
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $method:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(EpsPoly, Add, add);
forward_owned!(EpsPoly, Sub, sub);
forward_owned!(EpsPoly, Mul, mul);

impl Neg for EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        -&self
    }
}

fn fmt_terms(coeffs: &[Rational], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let show_coeff = k == 0 || !mag.is_one();
        if show_coeff {
            write!(f, "{}", fmt_rational(&mag))?;
        }
        match k {
            0 => {}
            1 if show_coeff => write!(f, "*e")?,
            1 => write!(f, "e")?,
            _ if show_coeff => write!(f, "*e^{k}")?,
            _ => write!(f, "e^{k}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.coeffs, f)
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsPoly({self})")
    }
}

/// Rational function `num/den` in ε, kept in a unique canonical form:
/// `gcd(num, den) = 1` and the lowest-order coefficient of `den` is `1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsRat {
    num: EpsPoly,
    den: EpsPoly,
}

impl EpsRat {
    pub fn new(num: EpsPoly, den: EpsPoly) -> Result<Self, EpsError> {
        if den.is_zero() {
            return Err(EpsError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = EpsPoly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let low = den.coeff(den.order().expect("nonzero"));
        let inv = low.recip();
        let (num, den) = (num.scale(&inv), den.scale(&inv));
        for p in [&num, &den] {
            let degree = p.degree().unwrap_or(0);
            if degree > DEGREE_CAP {
                return Err(EpsError::DegreeCapExceeded {
                    degree,
                    cap: DEGREE_CAP,
                });
            }
        }
        Ok(EpsRat { num, den })
    }

    pub fn zero() -> Self {
        EpsRat {
            num: EpsPoly::zero(),
            den: EpsPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(EpsPoly::one())
    }

    /// The infinitesimal itself.
    pub fn eps() -> Self {
        Self::from_poly(EpsPoly::eps_pow(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(EpsPoly::constant(c))
    }

    pub fn from_poly(p: EpsPoly) -> Self {
        EpsRat {
            num: p,
            den: EpsPoly::one(),
        }
    }

    pub fn numer(&self) -> &EpsPoly {
        &self.num
    }

    pub fn denom(&self) -> &EpsPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Sign for all sufficiently small `ε > 0`.
    pub fn sign(&self) -> i8 {
        self.num.sign() * self.den.sign()
    }

    pub fn checked_add(&self, rhs: &EpsRat) -> Result<EpsRat, EpsError> {
        if self.den == rhs.den {
            return EpsRat::new(&self.num + &rhs.num, self.den.clone());
        }
        EpsRat::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn checked_sub(&self, rhs: &EpsRat) -> Result<EpsRat, EpsError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &EpsRat) -> Result<EpsRat, EpsError> {
        EpsRat::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn checked_div(&self, rhs: &EpsRat) -> Result<EpsRat, EpsError> {
        if rhs.is_zero() {
            return Err(EpsError::DivisionByZero);
        }
        EpsRat::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Value of the reduced function at `ε = 0`.
    pub fn limit_at_zero(&self) -> Result<Rational, EpsError> {
        let d0 = self.den.constant_term();
        if d0.is_zero() {
            return Err(EpsError::PoleAtZero);
        }
        Ok(self.num.constant_term() / d0)
    }

    pub fn eval_at(&self, eps: &Rational) -> Result<Rational, EpsError> {
        let d = self.den.eval(eps);
        if d.is_zero() {
            return Err(EpsError::DivisionByZero);
        }
        Ok(self.num.eval(eps) / d)
    }
}

impl Ord for EpsRat {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive near zero, so cross-multiplying keeps the order.
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for EpsRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &EpsRat {
    type Output = EpsRat;
    fn neg(self) -> EpsRat {
        EpsRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for EpsRat {
    type Output = EpsRat;
    fn neg(self) -> EpsRat {
        -&self
    }
}

macro_rules! rat_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a EpsRat> for &'a EpsRat {
            type Output = EpsRat;
            fn $method(self, rhs: &EpsRat) -> EpsRat {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("ε-field arithmetic failed: {e}"),
                }
            }
        }
    };
}

rat_op!(Add, add, checked_add);
rat_op!(Sub, sub, checked_sub);
rat_op!(Mul, mul, checked_mul);
rat_op!(Div, div, checked_div);
forward_owned!(EpsRat, Add, add);
forward_owned!(EpsRat, Sub, sub);
forward_owned!(EpsRat, Mul, mul);
forward_owned!(EpsRat, Div, div);

impl fmt::Display for EpsRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for EpsRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsRat({self})")
    }
}

impl EpsPoly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl Zero for EpsRat {
    fn zero() -> Self {
        EpsRat::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for EpsRat {
    fn one() -> Self {
        EpsRat::one()
    }
}

impl Scalar for EpsRat {
    fn from_rational(r: &Rational) -> Self {
        EpsRat::constant(r.clone())
    }
    fn positive(&self) -> bool {
        self.sign() > 0
    }
    fn approx_f64(&self) -> f64 {
        self.limit_at_zero().map(|r| r.approx_f64()).unwrap_or(f64::NAN)
    }
}
