//! Exact extended-rational arithmetic.
//!
//! [`Rat`] is an arbitrary-precision rational number extended with the two
//! signed infinities. The boundary sequences that drive the region
//! classification start from an infinite seed value, and several bound
//! formulas divide by sequence entries that may be zero or infinite, so the
//! arithmetic here defines the handful of extended forms those recursions
//! need (`x/0` with `x != 0`, `x/inf`, `inf + x`, ...) and panics loudly on
//! genuinely indeterminate forms (`inf - inf`, `0 * inf`, `0/0`), which
//! would indicate a bug in a caller rather than bad user input.
//!
//! # Examples
//!
//! ```
//! use ia_dof::rational::Rat;
//!
//! let c1 = Rat::new(4, 1);
//! let next = Rat::from_int(4) - Rat::from_int(2) / c1; // 4 - 2/4
//! assert_eq!(next, Rat::new(7, 2));
//! assert_eq!(next.to_string(), "7/2");
//! assert!(Rat::infinity() > next);
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number extended with +/- infinity.
///
/// Finite values are always kept in lowest terms with a positive
/// denominator. The order is total: `-inf < finite < +inf`.
#[derive(Clone, PartialEq, Eq)]
pub enum Rat {
    /// Negative infinity.
    NegInf,
    /// A finite rational in lowest terms.
    Finite(BigRational),
    /// Positive infinity.
    PosInf,
}

impl Rat {
    /// Builds `num/den` in lowest terms.
    ///
    /// A zero denominator with a nonzero numerator yields the infinity of
    /// the numerator's sign; `0/0` panics.
    ///
    /// # Examples
    ///
    /// ```
    /// use ia_dof::rational::Rat;
    ///
    /// assert_eq!(Rat::new(6, 4), Rat::new(3, 2));
    /// assert_eq!(Rat::new(5, 0), Rat::infinity());
    /// assert_eq!(Rat::new(3, -6), Rat::new(-1, 2));
    /// ```
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return match num.sign() {
                num::bigint::Sign::Plus => Rat::PosInf,
                num::bigint::Sign::Minus => Rat::NegInf,
                num::bigint::Sign::NoSign => panic!("Rat::new: 0/0 is indeterminate"),
            };
        }
        Rat::Finite(BigRational::new(num, den))
    }

    /// The integer `value` as a rational.
    pub fn from_int(value: impl Into<BigInt>) -> Self {
        Rat::Finite(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rat::from_int(0)
    }

    pub fn one() -> Self {
        Rat::from_int(1)
    }

    pub fn infinity() -> Self {
        Rat::PosInf
    }

    pub fn neg_infinity() -> Self {
        Rat::NegInf
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Rat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Finite(r) if r.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rat::NegInf => false,
            Rat::Finite(r) => r.is_positive(),
            Rat::PosInf => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::NegInf => true,
            Rat::Finite(r) => r.is_negative(),
            Rat::PosInf => false,
        }
    }

    /// True for finite values with denominator 1.
    pub fn is_integer(&self) -> bool {
        matches!(self, Rat::Finite(r) if r.is_integer())
    }

    /// Numerator of a finite value in lowest terms.
    pub fn numer(&self) -> Option<&BigInt> {
        match self {
            Rat::Finite(r) => Some(r.numer()),
            _ => None,
        }
    }

    /// Denominator (positive) of a finite value in lowest terms.
    pub fn denom(&self) -> Option<&BigInt> {
        match self {
            Rat::Finite(r) => Some(r.denom()),
            _ => None,
        }
    }

    /// The integer value, if this is a finite integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Rat::Finite(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// Nearest `f64` (infinities map to the floating infinities).
    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::NegInf => f64::NEG_INFINITY,
            Rat::Finite(r) => r.to_f64().expect("finite rational converts to f64"),
            Rat::PosInf => f64::INFINITY,
        }
    }

    /// `max(self, 0)`.
    pub fn positive_part(&self) -> Self {
        if self.is_negative() {
            Rat::zero()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `1/0 = +inf` and `1/(+-inf) = 0`.
    pub fn recip(&self) -> Self {
        match self {
            Rat::NegInf | Rat::PosInf => Rat::zero(),
            Rat::Finite(r) if r.is_zero() => Rat::PosInf,
            Rat::Finite(r) => Rat::Finite(r.recip()),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<i64> for Rat {
    fn from(value: i64) -> Self {
        Rat::from_int(value)
    }
}

impl From<u64> for Rat {
    fn from(value: u64) -> Self {
        Rat::from_int(value)
    }
}

impl From<BigInt> for Rat {
    fn from(value: BigInt) -> Self {
        Rat::from_int(value)
    }
}

impl From<BigRational> for Rat {
    fn from(value: BigRational) -> Self {
        Rat::Finite(value)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        use Rat::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Rat {
    type Output = Rat;

    fn add(self, rhs: Rat) -> Rat {
        use Rat::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => panic!("Rat: inf - inf is indeterminate"),
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl Sub for Rat {
    type Output = Rat;

    fn sub(self, rhs: Rat) -> Rat {
        self + (-rhs)
    }
}

impl Neg for Rat {
    type Output = Rat;

    fn neg(self) -> Rat {
        match self {
            Rat::NegInf => Rat::PosInf,
            Rat::Finite(r) => Rat::Finite(-r),
            Rat::PosInf => Rat::NegInf,
        }
    }
}

impl Mul for Rat {
    type Output = Rat;

    fn mul(self, rhs: Rat) -> Rat {
        use Rat::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a * b),
            (inf, Finite(x)) | (Finite(x), inf) => {
                if x.is_zero() {
                    panic!("Rat: 0 * inf is indeterminate");
                }
                if x.is_positive() == matches!(inf, PosInf) {
                    PosInf
                } else {
                    NegInf
                }
            }
            (PosInf, PosInf) | (NegInf, NegInf) => PosInf,
            _ => NegInf,
        }
    }
}

impl Div for Rat {
    type Output = Rat;

    fn div(self, rhs: Rat) -> Rat {
        use Rat::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => {
                if b.is_zero() {
                    if a.is_zero() {
                        panic!("Rat: 0/0 is indeterminate");
                    }
                    if a.is_positive() {
                        PosInf
                    } else {
                        NegInf
                    }
                } else {
                    Finite(a / b)
                }
            }
            (Finite(_), PosInf) | (Finite(_), NegInf) => Rat::zero(),
            (inf, Finite(x)) => {
                if x.is_negative() {
                    -inf
                } else {
                    inf
                }
            }
            (_, _) => panic!("Rat: inf/inf is indeterminate"),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::NegInf => write!(f, "-inf"),
            Rat::PosInf => write!(f, "inf"),
            Rat::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

/// Error parsing a [`Rat`] from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {input:?}: expected \"p\", \"p/q\", \"inf\" or \"-inf\"")]
pub struct ParseRatError {
    pub input: String,
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRatError { input: s.to_string() };
        match s.trim() {
            "inf" | "+inf" => Ok(Rat::PosInf),
            "-inf" => Ok(Rat::NegInf),
            t => match t.split_once('/') {
                Some((num, den)) => {
                    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                    if den.is_zero() {
                        return Err(bad());
                    }
                    Ok(Rat::new(num, den))
                }
                None => {
                    let num: BigInt = t.parse().map_err(|_| bad())?;
                    Ok(Rat::from_int(num))
                }
            },
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Convenience: exact product of a big integer and a rational.
pub fn int_times(value: &BigInt, r: &Rat) -> Rat {
    Rat::from_int(value.clone()) * r.clone()
}

impl One for Rat {
    fn one() -> Self {
        Rat::one()
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::zero()
    }

    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}
