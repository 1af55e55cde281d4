//! Exact positive rationals for moduli, lengths and stretch factors.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid positive rational {0:?}")]
pub struct RationalError(pub String);

/// Always reduced, always strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosRational(Ratio<u64>);

impl PosRational {
    pub const ONE: PosRational = PosRational(Ratio::new_raw(1, 1));

    pub fn new(p: u64, q: u64) -> Result<Self, RationalError> {
        if p == 0 || q == 0 {
            return Err(RationalError(format!("{p}/{q}")));
        }
        Ok(PosRational(Ratio::new(p, q)))
    }

    pub fn integer(n: u64) -> Result<Self, RationalError> {
        Self::new(n, 1)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn recip(self) -> Self {
        PosRational(self.0.recip())
    }
}

impl Mul for PosRational {
    type Output = PosRational;
    fn mul(self, rhs: Self) -> Self {
        PosRational(self.0 * rhs.0)
    }
}

impl Div for PosRational {
    type Output = PosRational;
    fn div(self, rhs: Self) -> Self {
        PosRational(self.0 / rhs.0)
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for PosRational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        PosRational::new(p, q).map_err(|_| bad())
    }
}

impl Serialize for PosRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PosRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
