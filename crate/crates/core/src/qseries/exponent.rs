use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent denominator shared by every series in the crate.
pub const EXP_DENOM: i64 = 24;

/// An exponent of `q`, stored as an integer count of `1/24` steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QExp(i64);

impl QExp {
    pub const ZERO: QExp = QExp(0);

    /// Build from the number of `1/24` steps.
    pub const fn from_units(units: i64) -> Self {
        QExp(units)
    }

    pub const fn int(n: i64) -> Self {
        QExp(n * EXP_DENOM)
    }

    /// `num/den` as an exponent; fails unless the value is a multiple of 1/24.
    pub fn frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("exponent denominator is zero".into()));
        }
        let scaled = num * EXP_DENOM;
        if scaled % den != 0 {
            return Err(Error::OffGrid { num, den });
        }
        Ok(QExp(scaled / den))
    }

    pub const fn units(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % EXP_DENOM == 0
    }

    /// The integer value, if this exponent is integral.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / EXP_DENOM)
    }

    /// Reduced fraction `(num, den)` with `den > 0`.
    pub fn as_fraction(self) -> (i64, i64) {
        let g = self.0.gcd(&EXP_DENOM);
        (self.0 / g, EXP_DENOM / g)
    }

    /// Smallest grid exponent that is `>= self * num / den`.
    pub(crate) fn scale_ceil(self, num: i64, den: i64) -> QExp {
        QExp(Integer::div_ceil(&(self.0 * num), &den))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / EXP_DENOM as f64
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, rhs: QExp) -> QExp {
        QExp(self.0 + rhs.0)
    }
}

impl Sub for QExp {
    type Output = QExp;
    fn sub(self, rhs: QExp) -> QExp {
        QExp(self.0 - rhs.0)
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        QExp(-self.0)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.as_fraction();
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl Serialize for QExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for QExp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse exponent `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                QExp::frac(n, d)
            }
            None => Ok(QExp::int(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}
