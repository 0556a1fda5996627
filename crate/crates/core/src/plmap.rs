//! Continuous piecewise-linear self-maps of a compact interval.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Margin for floating-mode geometric decisions (covering, interior
/// intersection, sliver pruning).
pub const FLOAT_MARGIN: f64 = 1e-9;

/// Merge tolerance for floating-mode fixed points.
pub const FLOAT_MERGE_TOL: f64 = 1e-12;

/// Linear interpolation through `(b_j, v_j)`. The map is continuous by
/// construction and has no constant pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    breakpoints: Vec<Scalar>,
    values: Vec<Scalar>,
    slopes: Vec<Scalar>,
    exact: bool,
}

/// Per-piece outcome of a constant-slope check.
#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub constant: bool,
    pub slopes: Vec<Scalar>,
}

impl PLMap {
    pub fn new(breakpoints: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidMap(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMap("need at least two breakpoints".into()));
        }
        if let Some(w) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMap(format!(
                "breakpoints not strictly increasing at index {}: {} >= {}",
                w,
                breakpoints[w],
                breakpoints[w + 1]
            )));
        }
        if let Some(w) = values.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidMap(format!(
                "constant piece on [{}, {}]",
                breakpoints[w],
                breakpoints[w + 1]
            )));
        }
        let lo = &breakpoints[0];
        let hi = &breakpoints[breakpoints.len() - 1];
        if let Some(v) = values.iter().find(|v| *v < lo || *v > hi) {
            return Err(Error::InvalidMap(format!(
                "value {v} outside the domain [{lo}, {hi}]: not a self-map"
            )));
        }
        let slopes = breakpoints
            .windows(2)
            .zip(values.windows(2))
            .map(|(b, v)| (&v[1] - &v[0]) / (&b[1] - &b[0]))
            .collect();
        let exact = breakpoints.iter().chain(values.iter()).all(Scalar::is_exact);
        Ok(PLMap {
            breakpoints,
            values,
            slopes,
            exact,
        })
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn slopes(&self) -> &[Scalar] {
        &self.slopes
    }

    pub fn piece_count(&self) -> usize {
        self.slopes.len()
    }

    /// True when every breakpoint and value is rational.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Geometric margin: zero in rational mode, [`FLOAT_MARGIN`] otherwise.
    pub fn margin(&self) -> f64 {
        if self.exact {
            0.0
        } else {
            FLOAT_MARGIN
        }
    }

    pub fn lo(&self) -> &Scalar {
        &self.breakpoints[0]
    }

    pub fn hi(&self) -> &Scalar {
        &self.breakpoints[self.breakpoints.len() - 1]
    }

    pub fn domain(&self) -> Interval {
        Interval::hull(self.lo(), self.hi())
    }

    /// Piece `[b_j, b_{j+1}]` as an interval.
    pub fn piece(&self, j: usize) -> Interval {
        Interval::hull(&self.breakpoints[j], &self.breakpoints[j + 1])
    }

    /// The index `j` with `b_j <= x <= b_{j+1}` (the leftmost such piece
    /// when `x` is a breakpoint other than `b_0`).
    pub(crate) fn piece_index(&self, x: &Scalar) -> usize {
        let after = self.breakpoints.partition_point(|b| b < x);
        after.saturating_sub(1).min(self.piece_count() - 1)
    }

    fn check_in_domain(&self, what: &'static str, x: &Scalar) -> Result<()> {
        if x < self.lo() || x > self.hi() {
            return Err(Error::OutOfDomain {
                what,
                value: x.to_string(),
                lo: self.lo().to_string(),
                hi: self.hi().to_string(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        self.check_in_domain("point", x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Scalar) -> Scalar {
        let j = self.piece_index(x);
        if x == &self.breakpoints[j] {
            return self.values[j].clone();
        }
        if x == &self.breakpoints[j + 1] {
            return self.values[j + 1].clone();
        }
        let y = &self.values[j] + &self.slopes[j] * (x - &self.breakpoints[j]);
        if y.is_exact() {
            y
        } else {
            // Keep rounding inside the piece's range.
            let (a, b) = (&self.values[j], &self.values[j + 1]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            y.max(lo.clone()).min(hi.clone())
        }
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: &Scalar, n: usize) -> Result<Scalar> {
        self.check_in_domain("point", x)?;
        let mut y = x.clone();
        for _ in 0..n {
            y = self.eval_unchecked(&y);
        }
        Ok(y)
    }

    /// The exact set image `f(A)`.
    pub fn image(&self, a: &Interval) -> Result<Interval> {
        self.check_in_domain("interval endpoint", a.lo())?;
        self.check_in_domain("interval endpoint", a.hi())?;
        let mut lo = self.eval_unchecked(a.lo());
        let mut hi = lo.clone();
        let mut consider = |v: Scalar| {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        };
        consider(self.eval_unchecked(a.hi()));
        let start = self.breakpoints.partition_point(|b| b <= a.lo());
        for (b, v) in self.breakpoints[start..].iter().zip(&self.values[start..]) {
            if b >= a.hi() {
                break;
            }
            consider(v.clone());
        }
        Interval::new(lo, hi)
    }

    /// Number of maximal intervals of monotonicity.
    pub fn lap_count(&self) -> usize {
        1 + self
            .slopes
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count()
    }

    /// Interior breakpoints where the direction of monotonicity changes.
    pub fn turning_points(&self) -> Vec<Scalar> {
        self.slopes
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].signum() != w[1].signum())
            .map(|(j, _)| self.breakpoints[j + 1].clone())
            .collect()
    }

    pub fn is_constant_slope(&self, lambda: &Scalar, tol: f64) -> SlopeReport {
        let constant = self
            .slopes
            .iter()
            .all(|s| s.abs().cmp_eps(lambda, tol) == Ordering::Equal);
        SlopeReport {
            constant,
            slopes: self.slopes.clone(),
        }
    }

    /// Whether `f(domain) = domain`.
    pub fn is_onto(&self) -> bool {
        self.image(&self.domain())
            .map(|im| im.eq_eps(&self.domain(), self.margin()))
            .unwrap_or(false)
    }

    /// Conjugate by `x -> x * scale` on both axes.
    pub fn rescaled(&self, scale: &Scalar) -> Result<PLMap> {
        PLMap::new(
            self.breakpoints.iter().map(|b| b * scale).collect(),
            self.values.iter().map(|v| v * scale).collect(),
        )
    }
}
