//! Exact rational scalars and the coefficient trait shared by the dual
//! exact/float computation modes.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational scalar used throughout the algebraic layer.
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn rat(i: i64) -> Rat {
    Rat::from_integer(BigInt::from(i))
}

/// Build the rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Lossy conversion to binary64.
pub fn rat_to_f64(r: &Rat) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // Fall back to a quotient of approximations for very large entries.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Render as `p/q` (or plain `p` for integers), the form used in JSON exports.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q` or `p`.
pub fn rat_from_string(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// Coefficient ring shared by the exact (`Rat`) and float (`f64`) modes.
///
/// The two modes are never mixed silently: a value is either built over `Rat`
/// or over `f64`, and conversions are explicit.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(i: i64) -> Self;
    /// The constant 1/2 appearing in the group law and the contact form.
    fn one_half() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Coeff for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        rat(1)
    }
    fn from_int(i: i64) -> Self {
        rat(i)
    }
    fn one_half() -> Self {
        ratio(1, 2)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(i: i64) -> Self {
        i as f64
    }
    fn one_half() -> Self {
        0.5
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = rat_from_string(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert!(rat_from_string("1/0").is_none());
        assert_eq!(rat_from_string("4/2").unwrap(), rat(2));
    }
}
