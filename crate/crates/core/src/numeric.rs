//! Exact extended rationals.
//!
//! Every distance in the crate is an [`ExtReal`]: a nonnegative rational or
//! the symbol `inf`. Every probability level is a [`UnitVal`]. No floating
//! point value is ever produced, so verdicts computed on top of these types
//! are exact comparisons.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseValueError;

/// Nonnegative rational extended with `+inf`.
///
/// The derived order puts every finite value below [`ExtReal::Infinite`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtReal {
    Finite(BigRational),
    Infinite,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(BigRational::zero())
    }

    pub fn infinity() -> Self {
        ExtReal::Infinite
    }

    pub fn from_integer(n: u64) -> Self {
        ExtReal::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p / q` in lowest terms. Panics if `q == 0`.
    pub fn ratio(p: u64, q: u64) -> Self {
        assert!(q != 0, "zero denominator");
        ExtReal::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Wraps a rational; `None` when it is negative.
    pub fn from_rational(r: BigRational) -> Option<Self> {
        if r.is_negative() {
            None
        } else {
            Some(ExtReal::Finite(r))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExtReal::Finite(r) => r.is_zero(),
            ExtReal::Infinite => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            ExtReal::Infinite => None,
        }
    }

    /// Midpoint of two finite values; `None` if either is infinite.
    pub fn midpoint(&self, other: &Self) -> Option<Self> {
        let (a, b) = (self.as_rational()?, other.as_rational()?);
        Some(ExtReal::Finite((a + b) / BigRational::from_integer(BigInt::from(2))))
    }

    /// `self * k` for a rational factor `k >= 0`, with `inf * 0 = 0`.
    pub fn scale(&self, k: &BigRational) -> Self {
        debug_assert!(!k.is_negative());
        match self {
            ExtReal::Finite(r) => ExtReal::Finite(r * k),
            ExtReal::Infinite if k.is_zero() => ExtReal::zero(),
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }
}

/// Exact sum; `inf` absorbs.
pub fn ext_add(a: &ExtReal, b: &ExtReal) -> ExtReal {
    match (a, b) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite(x + y),
        _ => ExtReal::Infinite,
    }
}

pub fn ext_cmp(a: &ExtReal, b: &ExtReal) -> Ordering {
    a.cmp(b)
}

impl Add for &ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &ExtReal) -> ExtReal {
        ext_add(self, rhs)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ext_add(&self, &rhs)
    }
}

impl From<UnitVal> for ExtReal {
    fn from(u: UnitVal) -> Self {
        ExtReal::Finite(u.0)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(r) => write_rational(f, r),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(ExtReal::Infinite);
        }
        parse_rational(s).map(ExtReal::Finite)
    }
}

/// Exact rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitVal(BigRational);

impl UnitVal {
    pub fn zero() -> Self {
        UnitVal(BigRational::zero())
    }

    pub fn one() -> Self {
        UnitVal(BigRational::one())
    }

    /// `p / q`; panics unless `0 <= p/q <= 1`.
    pub fn ratio(p: u64, q: u64) -> Self {
        assert!(q != 0 && p <= q, "{p}/{q} is not in [0, 1]");
        UnitVal(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn new(r: BigRational) -> Option<Self> {
        if r.is_negative() || r > BigRational::one() {
            None
        } else {
            Some(UnitVal(r))
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        UnitVal(BigRational::one() - &self.0)
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        UnitVal((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// `self + t * (other - self)` for `t` in `[0, 1]`.
    pub fn lerp(&self, other: &Self, t: &BigRational) -> Self {
        UnitVal(&self.0 + (&other.0 - &self.0) * t)
    }
}

impl fmt::Display for UnitVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.0)
    }
}

impl FromStr for UnitVal {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Err(ParseValueError::OutOfUnitInterval(String::from(s)));
        }
        let r = parse_rational(s)?;
        UnitVal::new(r).ok_or_else(|| ParseValueError::OutOfUnitInterval(String::from(s)))
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

/// `"p"` or `"p/q"` with decimal digit strings only.
fn parse_rational(s: &str) -> Result<BigRational, ParseValueError> {
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(ParseValueError::Decimal(String::from(s)));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let p = digits(num).ok_or_else(|| ParseValueError::Malformed(String::from(s)))?;
    let q = digits(den).ok_or_else(|| ParseValueError::Malformed(String::from(s)))?;
    if q.is_zero() {
        return Err(ParseValueError::ZeroDenominator(String::from(s)));
    }
    Ok(BigRational::new(p, q))
}
