//! Constructions: Štefan maps, the constant-slope family `f_{p,lambda}` of
//! type `p`, the square root, and the `d`-fold square root of type `2^d p`.

use std::cmp::Ordering;

use num::traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::interval::{Interval, NamedInterval};
use crate::plmap::PLMap;
use crate::poly::{check_odd_period, eval_p, lambda_p, DEFAULT_LAMBDA_TOL};
use crate::scalar::Scalar;

/// How the slope parameter was given.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSpec {
    /// A rational or floating value.
    Value(Scalar),
    /// The minimal slope `lambda_p`, resolved by bisection.
    LambdaP,
}

impl LambdaSpec {
    /// `"lambda_p"`, an integer or fraction (exact), or a decimal. Decimals
    /// are only accepted when `floating` is set; fractions given with
    /// `floating` set are converted.
    pub fn parse(s: &str, floating: bool) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("lambda_p") {
            return Ok(LambdaSpec::LambdaP);
        }
        if let Ok(exact) = Scalar::parse_exact(s) {
            return Ok(LambdaSpec::Value(if floating { exact.to_float() } else { exact }));
        }
        if !floating {
            return Err(Error::Parse(format!(
                "decimal lambda {s:?} needs floating mode (or give an exact fraction)"
            )));
        }
        let x: f64 = s.parse().map_err(|_| Error::Parse(format!("not a lambda: {s:?}")))?;
        Ok(LambdaSpec::Value(Scalar::float(x)?))
    }

    pub fn resolve(&self, p: u64, tol: f64) -> Result<Scalar> {
        match self {
            LambdaSpec::Value(v) => Ok(v.clone()),
            LambdaSpec::LambdaP => lambda_p(p, tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionParams {
    pub p: u64,
    pub d: u32,
    pub lambda: Scalar,
    /// Tolerance for comparisons at `lambda = lambda_p`.
    pub tol: f64,
    /// Conjugate each square root back onto `[0, 1]`.
    pub rescale: bool,
}

impl ConstructionParams {
    pub fn new(p: u64, d: u32, lambda: Scalar, tol: f64) -> Result<Self> {
        check_odd_period(p)?;
        let params = ConstructionParams {
            p,
            d,
            lambda,
            tol,
            rescale: true,
        };
        // P_p is negative exactly on [0, lambda_p): lambda < lambda_p - tol
        // iff P_p(lambda + tol) < 0. Rationals are compared exactly.
        let probe = if params.lambda.is_exact() {
            params.lambda.clone()
        } else {
            &params.lambda + Scalar::float(tol)?
        };
        if eval_p(p, &probe)?.signum() < 0 {
            return Err(params.below_minimum());
        }
        Ok(params)
    }

    pub fn from_spec(p: u64, d: u32, spec: &LambdaSpec, tol: f64) -> Result<Self> {
        check_odd_period(p)?;
        Self::new(p, d, spec.resolve(p, tol)?, tol)
    }

    /// Parameters realizing topological entropy `h > 0` with `p = 3`:
    /// the least `d` with `log(lambda_3) / 2^d <= h`, and
    /// `lambda = exp(2^d h)`.
    pub fn for_entropy(h: f64, tol: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parse(format!("target entropy must be positive, got {h}")));
        }
        let floor = lambda_p(3, DEFAULT_LAMBDA_TOL)?.to_f64().ln();
        let mut d = 0u32;
        while floor / f64::from(1u32 << d) > h {
            d += 1;
        }
        let lambda = (f64::from(1u32 << d) * h).exp();
        Self::new(3, d, Scalar::float(lambda)?, tol)
    }

    pub fn with_rescale(mut self, rescale: bool) -> Self {
        self.rescale = rescale;
        self
    }

    /// `2^d p`.
    pub fn type_claim(&self) -> u64 {
        self.p << self.d
    }

    /// `log(lambda) / 2^d`.
    pub fn target_entropy(&self) -> f64 {
        self.lambda.to_f64().ln() / f64::from(1u32 << self.d)
    }

    fn below_minimum(&self) -> Error {
        let lp = lambda_p(self.p, DEFAULT_LAMBDA_TOL)
            .map(|l| l.to_f64())
            .unwrap_or(f64::NAN);
        // 12 decimals, truncated
        let shown = (lp * 1e12).floor() / 1e12;
        Error::LambdaBelowMinimum {
            p: self.p,
            lambda: self.lambda.to_string(),
            lambda_p: format!("{shown:.12}"),
        }
    }
}

/// `f_{p,lambda}` together with its orbit, `t` and the named intervals
/// `I_1..I_{p-1}`, `J_1..J_k`, `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructedMap {
    pub p: u64,
    pub lambda: Scalar,
    pub map: PLMap,
    pub orbit: Vec<Scalar>,
    pub t: Scalar,
    pub ell: Scalar,
    pub k: u64,
    pub intervals: Vec<NamedInterval>,
}

impl ConstructedMap {
    pub fn interval(&self, label: &str) -> Option<&Interval> {
        self.intervals
            .iter()
            .find(|n| n.label == label)
            .map(|n| &n.interval)
    }

    /// Summit height of the `J_i` tents (`x_{p-4}`, or 1 when `p = 3`).
    pub fn summit(&self) -> Scalar {
        summit(self.p, &self.orbit)
    }
}

fn summit(p: u64, orbit: &[Scalar]) -> Scalar {
    if p == 3 {
        Scalar::one()
    } else {
        orbit[p as usize - 4].clone()
    }
}

/// Štefan map of type `p = 2n + 1` on `[0, 2n]`.
pub fn stefan_map(p: u64) -> Result<PLMap> {
    check_odd_period(p)?;
    let n = ((p - 1) / 2) as i64;
    let s = Scalar::int;
    if n == 1 {
        PLMap::new(vec![s(0), s(1), s(2)], vec![s(2), s(0), s(1)])
    } else {
        PLMap::new(
            vec![s(0), s(n - 1), s(n), s(2 * n - 1), s(2 * n)],
            vec![s(2 * n), s(n + 1), s(n - 1), s(0), s(n)],
        )
    }
}

fn alternating_sum(lambda: &Scalar, upto: usize) -> Scalar {
    // sum_{j=0}^{upto} (-lambda)^j
    let neg = -lambda;
    let mut term = Scalar::one();
    let mut sum = Scalar::zero();
    for _ in 0..=upto {
        sum = sum + &term;
        term = term * &neg;
    }
    sum
}

/// The period-`p` orbit `x_0..x_{p-1}` and the point `t`, by closed form,
/// then checked against the defining recursion and orderings.
pub fn orbit_and_t(p: u64, lambda: &Scalar, tol: f64) -> Result<(Vec<Scalar>, Scalar)> {
    check_odd_period(p)?;
    let params = ConstructionParams {
        p,
        d: 0,
        lambda: lambda.clone(),
        tol,
        rescale: true,
    };
    if lambda <= &Scalar::one() {
        return Err(params.below_minimum());
    }
    let pu = p as usize;
    let mut orbit = Vec::with_capacity(pu);
    for i in 0..pu.saturating_sub(3) {
        let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        orbit.push(sign / lambda.pow((pu - i - 2) as u32) * alternating_sum(lambda, pu - i - 3));
    }
    orbit.push(lambda.recip());
    orbit.push(Scalar::zero());
    orbit.push(Scalar::one());
    debug_assert_eq!(orbit.len(), pu);
    let t = (lambda.pow((pu - 1) as u32) - alternating_sum(lambda, pu - 3)) / lambda.pow((pu - 1) as u32);

    let eps = if lambda.is_exact() { 0.0 } else { 1e-9 };
    for i in 0..pu - 3 {
        let rhs = Scalar::one() - lambda * &orbit[i];
        if !orbit[i + 1].eq_eps(&rhs, eps) {
            return Err(Error::Internal(format!("x_{} != 1 - lambda x_{}", i + 1, i)));
        }
    }
    if !orbit[0].eq_eps(&(lambda * (Scalar::one() - &t)), eps) {
        return Err(Error::Internal("x_0 != lambda (1 - t)".into()));
    }

    // x_{p-2} < x_{p-4} < ... < x_1 < x_0 < x_2 < ... < x_{p-3}
    let mut order: Vec<usize> = (1..pu - 1).rev().step_by(2).collect();
    order.extend((0..pu - 2).step_by(2));
    let ordered = order.windows(2).all(|w| orbit[w[0]] < orbit[w[1]]);
    let inv = lambda.recip();
    let t_ok = t.cmp_eps(&inv, tol) != Ordering::Less && t < Scalar::one();
    if !ordered || !t_ok {
        return Err(params.below_minimum());
    }
    Ok((orbit, t))
}

/// `f_{p,lambda}` on `[0, 1]`.
pub fn build_map(p: u64, lambda: &Scalar, tol: f64) -> Result<ConstructedMap> {
    let (orbit, t) = orbit_and_t(p, lambda, tol)?;
    let pu = p as usize;
    let zero = Scalar::zero;
    let inv = lambda.recip();
    let ell = &t - &inv;
    let height = summit(p, &orbit);

    let mut bps = vec![zero(), inv.clone()];
    let mut vals = vec![Scalar::one(), zero()];
    let mut js: Vec<Interval> = Vec::new();
    let mut k_interval: Option<Interval> = None;
    let mut k = 0u64;

    if ell.cmp_eps(&zero(), tol) == Ordering::Greater {
        let width = Scalar::int(2) * &height / lambda;
        let kk = (lambda * &ell / (Scalar::int(2) * &height)).floor();
        k = kk
            .to_u64()
            .ok_or_else(|| Error::Internal(format!("k = {kk} out of range")))?;
        for i in 1..=k {
            let lo = &inv + Scalar::int(i as i64 - 1) * &width;
            let hi = &inv + Scalar::int(i as i64) * &width;
            js.push(Interval::new(lo, hi)?);
        }
        let k_lo = &inv + Scalar::int(k as i64) * &width;
        let k_len = &t - &k_lo;
        match k_len.cmp_eps(&zero(), tol) {
            Ordering::Greater => k_interval = Some(Interval::new(k_lo, t.clone())?),
            Ordering::Equal => {
                // K reduces to {t}; the last J ends exactly at t.
                if let Some(last) = js.pop() {
                    js.push(Interval::new(last.lo().clone(), t.clone())?);
                }
            }
            Ordering::Less => return Err(Error::Internal(format!("|K| = {k_len} < 0"))),
        }
        for j in &js {
            bps.push(j.mid());
            vals.push(height.clone());
            bps.push(j.hi().clone());
            vals.push(zero());
        }
        if let Some(kv) = &k_interval {
            bps.push(kv.mid());
            vals.push(lambda * kv.len() / Scalar::int(2));
            bps.push(kv.hi().clone());
            vals.push(zero());
        }
    }
    bps.push(Scalar::one());
    vals.push(lambda * (Scalar::one() - &t));
    let map = PLMap::new(bps, vals)?;

    let mut intervals = Vec::with_capacity(pu + js.len());
    intervals.push(NamedInterval::new("I_1", Interval::hull(&orbit[0], &orbit[1])));
    for i in 2..=pu - 2 {
        intervals.push(NamedInterval::new(format!("I_{i}"), Interval::hull(&orbit[i - 2], &orbit[i])));
    }
    intervals.push(NamedInterval::new(format!("I_{}", pu - 1), Interval::hull(&t, &Scalar::one())));
    for (i, j) in js.iter().enumerate() {
        intervals.push(NamedInterval::new(format!("J_{}", i + 1), j.clone()));
    }
    if let Some(kv) = &k_interval {
        intervals.push(NamedInterval::new("K", kv.clone()));
    }

    let built = ConstructedMap {
        p,
        lambda: lambda.clone(),
        map,
        orbit,
        t,
        ell,
        k,
        intervals,
    };
    check_construction(&built)?;
    Ok(built)
}

fn check_construction(c: &ConstructedMap) -> Result<()> {
    let f = &c.map;
    let eps = f.margin();
    let fail = |what: String| Err(Error::Internal(what));
    if !f.is_constant_slope(&c.lambda, eps).constant {
        return fail("slope is not constant".into());
    }
    let n = c.orbit.len();
    for i in 0..n {
        if !f.eval(&c.orbit[i])?.eq_eps(&c.orbit[(i + 1) % n], eps) {
            return fail(format!("f(x_{i}) != x_{}", (i + 1) % n));
        }
    }
    let zero = Scalar::zero();
    for named in &c.intervals {
        let iv = &named.interval;
        let tent = named.label.starts_with('J') || named.label == "K";
        if !tent {
            continue;
        }
        if !f.eval(iv.lo())?.eq_eps(&zero, eps) || !f.eval(iv.hi())?.eq_eps(&zero, eps) {
            return fail(format!("{} endpoints do not map to 0", named.label));
        }
        if named.label.starts_with('J') && !f.eval(&iv.mid())?.eq_eps(&c.summit(), eps) {
            return fail(format!("{} summit is not x_(p-4)", named.label));
        }
    }
    Ok(())
}

/// Square root of `f` on `[0, b]`: `f + 2b` on `[0, b]`, linear on
/// `[b, 2b]`, `x - 2b` on `[2b, 3b]`; optionally conjugated onto `[0, 1]`.
pub fn square_root(f: &PLMap, rescale: bool) -> Result<PLMap> {
    if !f.lo().is_zero() {
        return Err(Error::InvalidMap(format!("square root needs a domain starting at 0, got {}", f.lo())));
    }
    let b = f.hi().clone();
    let two_b = Scalar::int(2) * &b;
    let three_b = Scalar::int(3) * &b;
    let mut bps = f.breakpoints().to_vec();
    let mut vals: Vec<Scalar> = f.values().iter().map(|v| v + &two_b).collect();
    bps.push(two_b);
    vals.push(Scalar::zero());
    bps.push(three_b.clone());
    vals.push(b);
    let g = PLMap::new(bps, vals)?;
    if rescale {
        g.rescaled(&three_b.recip())
    } else {
        Ok(g)
    }
}

/// A map of type `2^d p` with entropy `log(lambda) / 2^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypedMap {
    pub params: ConstructionParams,
    /// The `d = 0` map the square roots were taken of.
    pub base: ConstructedMap,
    pub map: PLMap,
}

pub fn build_typed(params: &ConstructionParams) -> Result<TypedMap> {
    let base = build_map(params.p, &params.lambda, params.tol)?;
    let mut map = base.map.clone();
    for _ in 0..params.d {
        map = square_root(&map, params.rescale)?;
    }
    Ok(TypedMap {
        params: params.clone(),
        base,
        map,
    })
}
