//! Coefficient scalars.
//!
//! All exact computation runs over arbitrary-precision rationals ([`Rat`]);
//! the numeric harnesses reuse the same polynomial code over `f64` or
//! `Complex64` through the [`Coeff`] trait.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::PolyError;

/// Exact rational scalar.
pub type Rat = BigRational;
/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Coefficient ring for polynomial arithmetic.
///
/// Division must be exact on the instantiations used for exact work
/// (fields); `f64`/`Complex64` instantiations are only used for numeric
/// evaluation where approximate division is acceptable.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

/// Rational from small integers. Panics on zero denominator; use
/// [`checked_rat`] for untrusted input.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational construction that rejects zero denominators.
pub fn checked_rat(num: Int, den: Int) -> Result<Rat, PolyError> {
    if den.is_zero() {
        return Err(PolyError::ZeroDenominator);
    }
    Ok(Rat::new(num, den))
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let ns = int_sqrt(r.numer())?;
    let ds = int_sqrt(r.denom())?;
    Some(Rat::new(ns, ds))
}

/// Exact integer square root, if `n` is a perfect square.
pub fn int_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Rational to `f64` (best effort; exact values at this scale convert fine).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// gcd of two rationals viewed as a fraction lattice: gcd of numerators over
/// lcm of denominators. Used for polynomial content.
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rat::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_sqrt_perfect_square() {
        assert_eq!(rat_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt(&rat(2, 1)), None);
        assert_eq!(rat_sqrt(&rat(-4, 1)), None);
        assert_eq!(rat_sqrt(&rat(0, 1)), Some(rat(0, 1)));
    }

    #[test]
    fn checked_rat_rejects_zero_denominator() {
        assert_eq!(
            checked_rat(Int::from(1), Int::from(0)),
            Err(PolyError::ZeroDenominator)
        );
    }

    #[test]
    fn rat_gcd_basic() {
        assert_eq!(rat_gcd(&rat(4, 3), &rat(2, 9)), rat(2, 9));
        assert_eq!(rat_gcd(&rat(0, 1), &rat(-5, 2)), rat(5, 2));
    }
}
