//! Sharkovskii's order and the period sets it prescribes.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A type for Sharkovskii's order: a positive integer or `2^inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SharkovskiiValue {
    Finite(u64),
    TwoToInfinity,
}

/// Position in the order, compared lexicographically.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Rank {
    /// `2^e * m`, `m` odd and `>= 3`: by `e`, then `m`.
    TimesOdd(u32, u64),
    Infinity,
    /// `2^e`, by decreasing `e`.
    PowerOfTwo(Reverse<u32>),
}

impl SharkovskiiValue {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("Sharkovskii values are >= 1".into()));
        }
        Ok(SharkovskiiValue::Finite(n))
    }

    fn rank(&self) -> Rank {
        match *self {
            SharkovskiiValue::TwoToInfinity => Rank::Infinity,
            SharkovskiiValue::Finite(n) => {
                let e = n.trailing_zeros();
                let m = n >> e;
                if m == 1 {
                    Rank::PowerOfTwo(Reverse(e))
                } else {
                    Rank::TimesOdd(e, m)
                }
            }
        }
    }
}

impl PartialOrd for SharkovskiiValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `a < b` iff `a` comes first in `3 < 5 < 7 < ... < 2*3 < ... < 4 < 2 < 1`.
impl Ord for SharkovskiiValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

pub fn sharkovskii_le(a: SharkovskiiValue, b: SharkovskiiValue) -> bool {
    a <= b
}

/// `{ m <= q_max : type_n <= m }`: the periods up to `q_max` of a map of
/// type `type_n`.
pub fn expected_period_set(type_n: SharkovskiiValue, q_max: u64) -> BTreeSet<u64> {
    (1..=q_max)
        .filter(|&m| sharkovskii_le(type_n, SharkovskiiValue::Finite(m)))
        .collect()
}

impl fmt::Display for SharkovskiiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SharkovskiiValue::Finite(n) => write!(f, "{n}"),
            SharkovskiiValue::TwoToInfinity => f.write_str("2^inf"),
        }
    }
}

impl FromStr for SharkovskiiValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2^inf" | "2^∞" => Ok(SharkovskiiValue::TwoToInfinity),
            t => SharkovskiiValue::new(
                t.parse()
                    .map_err(|_| Error::Parse(format!("not a Sharkovskii value: {s:?}")))?,
            ),
        }
    }
}

impl Serialize for SharkovskiiValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SharkovskiiValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
