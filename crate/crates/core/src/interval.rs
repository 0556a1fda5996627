use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Closed interval `[lo, hi]`; `lo == hi` is allowed (degenerate).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

impl Interval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// Convex hull of two points, `<a, b>`.
    pub fn hull(a: &Scalar, b: &Scalar) -> Self {
        if a <= b {
            Interval { lo: a.clone(), hi: b.clone() }
        } else {
            Interval { lo: b.clone(), hi: a.clone() }
        }
    }

    pub fn point(x: Scalar) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn len(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Scalar {
        Scalar::midpoint(&self.lo, &self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo.is_exact() && self.hi.is_exact()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `self ⊇ other`, allowing `eps` slack at both ends in floating mode.
    pub fn covers(&self, other: &Interval, eps: f64) -> bool {
        self.lo.cmp_eps(&other.lo, eps) != Ordering::Greater
            && self.hi.cmp_eps(&other.hi, eps) != Ordering::Less
    }

    /// Whether `self` meets the open interior of `other` (by more than `eps`
    /// in floating mode).
    pub fn meets_interior(&self, other: &Interval, eps: f64) -> bool {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        hi.cmp_eps(&lo, eps) == Ordering::Greater
    }

    /// Intersection, if nonempty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull_with(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn eq_eps(&self, other: &Interval, eps: f64) -> bool {
        self.lo.eq_eps(&other.lo, eps) && self.hi.eq_eps(&other.hi, eps)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An interval with a label such as `I_3`, `J_1` or `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedInterval {
    pub label: String,
    #[serde(flatten)]
    pub interval: Interval,
}

impl NamedInterval {
    pub fn new(label: impl Into<String>, interval: Interval) -> Self {
        NamedInterval {
            label: label.into(),
            interval,
        }
    }
}
