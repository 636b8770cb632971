use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always stored reduced with a positive denominator.
///
/// Displays as `num/den` even for integers, e.g. `1/1`, `0/1`, `-1/18`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Nearest `f64`; the only lossy operation on this type.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `num/den` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        ExactRational::new(n, d)
    }
}

impl Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> Self {
        ExactRational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl Sub for ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> Self {
        ExactRational(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl Mul for ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> Self {
        ExactRational(self.0 * rhs.0)
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> Self {
        ExactRational(-self.0)
    }
}
