//! Branch refinement of iterates.
//!
//! A branch of `f^q` is a maximal interval on which `f^q` is affine, together
//! with the itinerary of pieces it visits. Refining a branch of `f^q` by the
//! pieces of `f` met by its image yields the branches of `f^{q+1}`, in
//! left-to-right order. The same engine counts laps of iterates and
//! enumerates periodic points.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::plmap::{PLMap, FLOAT_MARGIN, FLOAT_MERGE_TOL};
use crate::scalar::Scalar;

/// Default cap on the number of branches held or visited.
pub const DEFAULT_BRANCH_CAP: usize = 10_000_000;

/// Default depth for lap growth.
pub const DEFAULT_LAP_DEPTH: usize = 16;

/// `f^q(x) = slope * x + offset` on `domain`, reached through `itinerary`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub domain: Interval,
    pub slope: Scalar,
    pub offset: Scalar,
    pub itinerary: Vec<usize>,
}

impl Branch {
    pub fn image(&self) -> Interval {
        Interval::hull(&self.apply(self.domain.lo()), &self.apply(self.domain.hi()))
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        &self.slope * x + &self.offset
    }
}

#[derive(Clone, Debug)]
struct Affine {
    lo: Scalar,
    hi: Scalar,
    slope: Scalar,
    offset: Scalar,
}

impl Affine {
    fn identity(f: &PLMap) -> Self {
        Affine {
            lo: f.lo().clone(),
            hi: f.hi().clone(),
            slope: Scalar::one(),
            offset: Scalar::zero(),
        }
    }

    /// Children under one more application of `f`, left to right, tagged
    /// with the piece index.
    fn refine(&self, f: &PLMap) -> Vec<(usize, Affine)> {
        let eps = f.margin();
        let a = &self.slope * &self.lo + &self.offset;
        let b = &self.slope * &self.hi + &self.offset;
        let (ilo, ihi) = if a <= b { (a, b) } else { (b, a) };
        let first = f.piece_index(&ilo);
        let last = f.piece_index(&ihi).max(first);
        let bp = f.breakpoints();
        let increasing = self.slope.signum() > 0;
        let mut out = Vec::with_capacity(last - first + 1);
        for j in first..=last {
            let olo = ilo.clone().max(bp[j].clone());
            let ohi = ihi.clone().min(bp[j + 1].clone());
            if ohi.cmp_eps(&olo, eps) != Ordering::Greater {
                continue;
            }
            let pre_lo = (&olo - &self.offset) / &self.slope;
            let pre_hi = (&ohi - &self.offset) / &self.slope;
            let (lo, hi) = if increasing { (pre_lo, pre_hi) } else { (pre_hi, pre_lo) };
            let s = &f.slopes()[j];
            // f on piece j: y = v_j + s (x - b_j)
            let piece_offset = &f.values()[j] - s * &bp[j];
            out.push((
                j,
                Affine {
                    lo,
                    hi,
                    slope: s * &self.slope,
                    offset: s * &self.offset + piece_offset,
                },
            ));
        }
        if !increasing {
            out.reverse();
        }
        out
    }
}

/// All branches of `f^q`, left to right.
pub fn branches(f: &PLMap, q: usize, cap: usize) -> Result<Vec<Branch>> {
    let mut out = Vec::new();
    visit_branches(f, q, cap, |b| {
        out.push(b.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Depth-first walk over the branches of `f^q`; partial itineraries whose
/// admissible domain is empty are never extended.
pub fn visit_branches<F>(f: &PLMap, q: usize, cap: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&Branch) -> Result<()>,
{
    struct Walk<'a, F> {
        f: &'a PLMap,
        q: usize,
        cap: usize,
        leaves: usize,
        path: Vec<usize>,
        visit: F,
    }

    impl<F: FnMut(&Branch) -> Result<()>> Walk<'_, F> {
        fn go(&mut self, node: &Affine) -> Result<()> {
            if self.path.len() == self.q {
                self.leaves += 1;
                if self.leaves > self.cap {
                    return Err(Error::BranchCapExceeded {
                        cap: self.cap,
                        failed: self.q,
                        completed: self.q.saturating_sub(1),
                    });
                }
                let branch = Branch {
                    domain: Interval::hull(&node.lo, &node.hi),
                    slope: node.slope.clone(),
                    offset: node.offset.clone(),
                    itinerary: self.path.clone(),
                };
                return (self.visit)(&branch);
            }
            for (j, child) in node.refine(self.f) {
                self.path.push(j);
                self.go(&child)?;
                self.path.pop();
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        f,
        q,
        cap,
        leaves: 0,
        path: Vec::with_capacity(q),
        visit: &mut visit,
    };
    walk.go(&Affine::identity(f))
}

/// Lap counts `L(1), ..., L(n_max)` of the iterates of `f`.
pub fn lap_growth(f: &PLMap, n_max: usize, cap: usize) -> Result<Vec<u64>> {
    let mut level = vec![Affine::identity(f)];
    let mut laps = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut next = Vec::with_capacity(level.len() * 2);
        for node in &level {
            next.extend(node.refine(f).into_iter().map(|(_, a)| a));
            if next.len() > cap {
                return Err(Error::BranchCapExceeded {
                    cap,
                    failed: n,
                    completed: n - 1,
                });
            }
        }
        let l = 1 + next
            .windows(2)
            .filter(|w| w[0].slope.signum() != w[1].slope.signum())
            .count();
        laps.push(l as u64);
        level = next;
    }
    Ok(laps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPoint {
    pub point: Scalar,
    pub least_period: usize,
}

/// Every fixed point of `f^q`, sorted, with its least period.
pub fn periodic_points(f: &PLMap, q: usize, cap: usize) -> Result<Vec<PeriodicPoint>> {
    let exact = f.is_exact();
    let mut points: Vec<Scalar> = Vec::new();
    visit_branches(f, q, cap, |b| {
        if let Some(x) = fixed_point(b, exact)? {
            points.push(x);
        }
        Ok(())
    })?;
    points.sort();
    if exact {
        points.dedup();
    } else {
        points.dedup_by(|a, b| a.eq_eps(b, FLOAT_MERGE_TOL));
    }
    points
        .into_iter()
        .map(|x| {
            let least_period = least_period(f, &x, q)?;
            Ok(PeriodicPoint { point: x, least_period })
        })
        .collect()
}

fn fixed_point(b: &Branch, exact: bool) -> Result<Option<Scalar>> {
    let tol = if exact { 0.0 } else { FLOAT_MERGE_TOL };
    let one_minus = Scalar::one() - &b.slope;
    if one_minus.eq_eps(&Scalar::zero(), tol) {
        return if b.offset.eq_eps(&Scalar::zero(), tol) {
            Err(Error::UnitSlope)
        } else {
            Ok(None)
        };
    }
    let x = &b.offset / one_minus;
    let lo = b.domain.lo();
    let hi = b.domain.hi();
    if x.cmp_eps(lo, tol) == Ordering::Less || x.cmp_eps(hi, tol) == Ordering::Greater {
        return Ok(None);
    }
    Ok(Some(x.max(lo.clone()).min(hi.clone())))
}

/// Least `j` dividing `q` with `f^j(x) = x`.
fn least_period(f: &PLMap, x: &Scalar, q: usize) -> Result<usize> {
    let tol = if f.is_exact() { 0.0 } else { FLOAT_MARGIN };
    let mut y = x.clone();
    for j in 1..=q {
        y = f.eval(&y)?;
        if q.is_multiple_of(j) && y.eq_eps(x, tol) {
            return Ok(j);
        }
    }
    Err(Error::Internal(format!("{x} is not a fixed point of f^{q}")))
}
