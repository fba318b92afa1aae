//! Exact rational values as they appear in reports.
//!
//! Every bound in the engine is a `Rational64`. [`Q`] wraps one for
//! rendering and serialization: always `p/q`, never a decimal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::rational::Rational64;
use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = Rational64;

/// Builds `n/d` in lowest terms.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// A rational rendered as `numerator/denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Q(pub Rat);

impl Q {
    pub fn new(n: i64, d: i64) -> Self {
        Q(Rat::new(n, d))
    }

    pub fn value(self) -> Rat {
        self.0
    }

    pub fn one() -> Self {
        Q(Rat::one())
    }

    pub fn zero() -> Self {
        Q(Rat::zero())
    }
}

impl From<Rat> for Q {
    fn from(r: Rat) -> Self {
        Q(r)
    }
}

impl From<Q> for Rat {
    fn from(q: Q) -> Self {
        q.0
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseQError(pub String);

impl fmt::Display for ParseQError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not an exact rational: {:?}", self.0)
    }
}

impl std::error::Error for ParseQError {}

impl FromStr for Q {
    type Err = ParseQError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| err())?;
        let d: i64 = d.parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        Ok(Q::new(n, d))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
