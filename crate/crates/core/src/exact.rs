//! Exact rational arithmetic.
//!
//! Two representations are used throughout the crate:
//!
//! * [`Rat`], a general arbitrary-precision rational, for inputs and for
//!   values produced by affine interpolation at arbitrary positions.
//! * [`RadixRat`], a rational whose denominator is a power of a fixed radix.
//!   Geometry lives on triadic lattices ([`Triadic`], radix 3) and the
//!   parameter scaffold on radix-15 lattices ([`Base15`]). Addition and
//!   comparison only need exponent alignment, never a gcd.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision rational.
pub type Rat = BigRational;

/// Rational with denominator `3^exp`.
pub type Triadic = RadixRat<3>;

/// Rational with denominator `15^exp`.
pub type Base15 = RadixRat<15>;

/// `num / R^exp`, kept in lowest terms (`num` not divisible by `R` when
/// `exp > 0`, and `exp == 0` for zero), so structural equality is value
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadixRat<const R: u32> {
    num: BigInt,
    exp: u32,
}

impl<const R: u32> RadixRat<R> {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        let radix = BigInt::from(R);
        if num.is_zero() {
            return Self { num, exp: 0 };
        }
        while exp > 0 {
            let (q, r) = num.div_rem(&radix);
            if !r.is_zero() {
                break;
            }
            num = q;
            exp -= 1;
        }
        Self { num, exp }
    }

    pub fn zero() -> Self {
        Self { num: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self { num: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(n, 0)
    }

    /// `R^-exp`.
    pub fn unit(exp: u32) -> Self {
        Self { num: BigInt::one(), exp }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    /// Exponent of the reduced denominator.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Numerator over the denominator `R^exp`. Panics if `exp` is smaller
    /// than the reduced exponent.
    pub fn scaled_numer(&self, exp: u32) -> BigInt {
        assert!(exp >= self.exp, "cannot express {self:?} with denominator {R}^{exp}");
        &self.num * pow_big(R, exp - self.exp)
    }

    /// Divides by `R^k`.
    pub fn shr(&self, k: u32) -> Self {
        Self::new(self.num.clone(), self.exp + k)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::new(&self.num * k, self.exp)
    }

    pub fn to_rational(&self) -> Rat {
        Rat::new(self.num.clone(), pow_big(R, self.exp))
    }

    /// Exact conversion back from a general rational, if the reduced
    /// denominator is a power of `R`.
    pub fn from_rational(r: &Rat) -> Option<Self> {
        let mut den = r.denom().clone();
        let radix = BigInt::from(R);
        let mut exp = 0u32;
        // Denominators of radix-15 values can carry 3s and 5s unevenly, so
        // scale up rather than divide down.
        while !den.is_one() {
            let g = den.gcd(&radix);
            if g.is_one() {
                return None;
            }
            den /= g;
            exp += 1;
        }
        let scale = pow_big(R, exp);
        let num = r.numer() * &scale / r.denom();
        Some(Self::new(num, exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let e = self.exp.max(other.exp);
        (self.scaled_numer(e), other.scaled_numer(e), e)
    }
}

impl<const R: u32> Default for RadixRat<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const R: u32> fmt::Debug for RadixRat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<const R: u32> fmt::Display for RadixRat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}^{}", self.num, R, self.exp)
        }
    }
}

impl<const R: u32> Ord for RadixRat<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl<const R: u32> PartialOrd for RadixRat<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const R: u32> Add for &RadixRat<R> {
    type Output = RadixRat<R>;
    fn add(self, rhs: Self) -> RadixRat<R> {
        let (a, b, e) = self.aligned(rhs);
        RadixRat::new(a + b, e)
    }
}

impl<const R: u32> Sub for &RadixRat<R> {
    type Output = RadixRat<R>;
    fn sub(self, rhs: Self) -> RadixRat<R> {
        let (a, b, e) = self.aligned(rhs);
        RadixRat::new(a - b, e)
    }
}

impl<const R: u32> Mul for &RadixRat<R> {
    type Output = RadixRat<R>;
    fn mul(self, rhs: Self) -> RadixRat<R> {
        RadixRat::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl<const R: u32> Neg for &RadixRat<R> {
    type Output = RadixRat<R>;
    fn neg(self) -> RadixRat<R> {
        RadixRat { num: -&self.num, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<const R: u32> $tr for RadixRat<R> {
            type Output = RadixRat<R>;
            fn $m(self, rhs: Self) -> RadixRat<R> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Wire form: decimal numerator plus the exponent of the radix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadixRepr {
    pub num: String,
    pub exp: u32,
}

impl<const R: u32> Serialize for RadixRat<R> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RadixRepr { num: self.num.to_string(), exp: self.exp }.serialize(s)
    }
}

impl<'de, const R: u32> Deserialize<'de> for RadixRat<R> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = RadixRepr::deserialize(d)?;
        let num: BigInt =
            repr.num.parse().map_err(|_| serde::de::Error::custom(format!("bad numerator {:?}", repr.num)))?;
        Ok(Self::new(num, repr.exp))
    }
}

/// `base^exp` as a big integer.
pub fn pow_big(base: u32, exp: u32) -> BigInt {
    Pow::pow(BigInt::from(base), exp)
}

/// `p/q` as a rational.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `base^-exp` as a rational.
pub fn rat_pow_inv(base: u32, exp: u32) -> Rat {
    Rat::new(BigInt::one(), pow_big(base, exp))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite binary64.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"` into an
/// exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = Pow::pow(BigInt::from(10u32), frac_part.len() as u32);
    let r = Rat::new(num, den);
    Some(if neg { -r } else { r })
}

/// Absolute value helper for rationals.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
