//! Certification of constructed maps: period sets against a claimed
//! Sharkovskii type, entropy from lap growth, and topological mixing by
//! exact interval iteration.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::branch::{lap_growth, periodic_points};
use crate::error::{Error, Result};
use crate::graph::build_covering_graph;
use crate::interval::{Interval, NamedInterval};
use crate::plmap::PLMap;
use crate::scalar::Scalar;
use crate::sharkovskii::{expected_period_set, SharkovskiiValue};

/// Default largest period checked by [`verify_type`].
pub const DEFAULT_Q_MAX: u64 = 13;

/// Margin used when deciding that a floating image covers the domain.
pub const MIXING_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Refuted,
    Inconclusive,
}

/// Cycle-based exclusion of periods: a period-`q` point whose orbit avoids
/// the partition boundary follows a cycle of length `q` in the covering
/// graph.
#[derive(Clone, Debug, Serialize)]
pub struct GraphCertificate {
    pub census: BTreeMap<usize, u64>,
    /// Least periods of the periodic partition endpoints.
    pub boundary_periods: BTreeMap<String, u64>,
    /// Periods with no primitive cycle and no boundary orbit.
    pub excluded: BTreeSet<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeReport {
    pub claimed: SharkovskiiValue,
    pub q_max: u64,
    /// Largest `q` for which every fixed point of `f^q` was enumerated.
    pub checked_through: u64,
    /// Present periods with one witness point each (the least one).
    pub present: BTreeMap<u64, Scalar>,
    pub absent: BTreeSet<u64>,
    pub expected: BTreeSet<u64>,
    pub graph: Option<GraphCertificate>,
    pub verdict: Verdict,
    pub refutation: Option<String>,
}

pub fn verify_type(
    f: &PLMap,
    claimed: SharkovskiiValue,
    q_max: u64,
    partition: Option<&[NamedInterval]>,
    cap: usize,
) -> Result<TypeReport> {
    let mut present: BTreeMap<u64, Scalar> = BTreeMap::new();
    let mut checked_through = 0;
    for q in 1..=q_max {
        match periodic_points(f, q as usize, cap) {
            Ok(points) => {
                for pt in points {
                    present.entry(pt.least_period as u64).or_insert(pt.point);
                }
                checked_through = q;
            }
            Err(Error::BranchCapExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let expected = expected_period_set(claimed, q_max);
    let absent = (1..=checked_through).filter(|q| !present.contains_key(q)).collect();

    let graph = partition
        .map(|parts| graph_certificate(f, parts, q_max as usize))
        .transpose()?;

    let mut refutation = None;
    for q in 1..=checked_through {
        let has = present.contains_key(&q);
        if has != expected.contains(&q) {
            refutation = Some(match present.get(&q) {
                Some(x) => format!("period {q} is present (witness {x}) but not implied by type {claimed}"),
                None => format!("period {q} is required by type {claimed} but absent"),
            });
            break;
        }
    }
    if refutation.is_none() {
        if let Some(cert) = &graph {
            if let Some(q) = cert.excluded.iter().find(|q| present.contains_key(q)) {
                refutation = Some(format!(
                    "period {q} excluded by the covering graph but found (witness {})",
                    present[q]
                ));
            }
        }
    }
    let verdict = if refutation.is_some() {
        Verdict::Refuted
    } else if checked_through < q_max {
        Verdict::Inconclusive
    } else {
        Verdict::Consistent
    };
    Ok(TypeReport {
        claimed,
        q_max,
        checked_through,
        present,
        absent,
        expected,
        graph,
        verdict,
        refutation,
    })
}

fn graph_certificate(f: &PLMap, parts: &[NamedInterval], max_len: usize) -> Result<GraphCertificate> {
    let g = build_covering_graph(f, parts)?;
    let census = g.primitive_cycle_census(max_len);
    let tol = f.margin();
    let mut endpoints: Vec<Scalar> = parts
        .iter()
        .flat_map(|n| [n.interval.lo().clone(), n.interval.hi().clone()])
        .collect();
    endpoints.sort();
    endpoints.dedup_by(|a, b| a.eq_eps(b, tol));
    let mut boundary_periods = BTreeMap::new();
    for x in endpoints {
        let mut y = x.clone();
        for j in 1..=max_len as u64 {
            y = f.eval(&y)?;
            if y.eq_eps(&x, tol) {
                boundary_periods.insert(x.to_string(), j);
                break;
            }
        }
    }
    let boundary: BTreeSet<u64> = boundary_periods.values().copied().collect();
    let excluded = census
        .iter()
        .filter(|(q, &count)| count == 0 && !boundary.contains(&(**q as u64)))
        .map(|(q, _)| *q as u64)
        .collect();
    Ok(GraphCertificate {
        census,
        boundary_periods,
        excluded,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyEstimate {
    /// `L(1), ..., L(n_max)`.
    pub laps: Vec<u64>,
    /// `log(L(n) / L(n-1))` for `n = 2..=n_max`.
    pub log_ratios: Vec<f64>,
    /// Least-squares slope of `log L(n)` over the second half of the range.
    pub h: f64,
    /// `log L(n_max) / n_max`.
    pub h_cesaro: f64,
    /// `log(L(n_max) / L(n_max - 1))`.
    pub h_last: f64,
    pub target: Option<f64>,
    pub gap: Option<f64>,
}

pub fn estimate_entropy(f: &PLMap, n_max: usize, target: Option<f64>, cap: usize) -> Result<EntropyEstimate> {
    if n_max < 3 {
        return Err(Error::Parse(format!("entropy estimation needs n_max >= 3, got {n_max}")));
    }
    let laps = lap_growth(f, n_max, cap)?;
    let logs: Vec<f64> = laps.iter().map(|&l| (l as f64).ln()).collect();
    let log_ratios: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    let h_cesaro = logs[n_max - 1] / n_max as f64;
    let h_last = log_ratios[log_ratios.len() - 1];

    // n runs from n_max/2 to n_max
    let first = n_max / 2;
    let xs: Vec<f64> = (first..=n_max).map(|n| n as f64).collect();
    let ys: Vec<f64> = (first..=n_max).map(|n| logs[n - 1]).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let h = (sxy / sxx).max(0.0);

    Ok(EntropyEstimate {
        laps,
        log_ratios,
        h,
        h_cesaro,
        h_last,
        target,
        gap: target.map(|t| (h - t).abs()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedOutcome {
    pub seed: Interval,
    /// First `n` with `f^n(seed)` equal to the whole domain.
    pub first_n: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub onto: bool,
    pub seed_width: Scalar,
    pub cap: usize,
    pub seeds: Vec<SeedOutcome>,
    pub max_n: Option<usize>,
    pub all_mixed: bool,
}

fn covers_domain(f: &PLMap, a: &Interval) -> bool {
    if f.is_exact() && a.is_exact() {
        a == &f.domain()
    } else {
        a.lo().to_f64() <= f.lo().to_f64() + MIXING_EPS && a.hi().to_f64() >= f.hi().to_f64() - MIXING_EPS
    }
}

/// Images `A, f(A), f^2(A), ...` up to and including the first one equal to
/// the domain, or `cap + 1` images.
pub fn image_trace(f: &PLMap, a: &Interval, cap: usize) -> Result<Vec<Interval>> {
    let mut trace = vec![a.clone()];
    let mut cur = a.clone();
    for _ in 0..cap {
        if covers_domain(f, &cur) {
            break;
        }
        cur = f.image(&cur)?;
        trace.push(cur.clone());
    }
    Ok(trace)
}

/// Least `n <= cap` with `f^n(A)` equal to the domain.
pub fn mixing_time(f: &PLMap, a: &Interval, cap: usize) -> Result<Option<usize>> {
    let trace = image_trace(f, a, cap)?;
    let n = trace.len() - 1;
    Ok(covers_domain(f, &trace[n]).then_some(n))
}

pub fn verify_mixing(f: &PLMap, seed_width: &Scalar, grid: usize, cap: usize) -> Result<MixingReport> {
    if seed_width.signum() <= 0 || grid == 0 || cap == 0 {
        return Err(Error::Parse("mixing needs seed_width > 0, grid >= 1, cap >= 1".into()));
    }
    let lo = f.lo().clone();
    let hi = f.hi().clone();
    let span = &hi - &lo;
    let half = seed_width / Scalar::int(2);
    let mut seeds = Vec::with_capacity(grid);
    for i in 0..grid {
        let center = &lo + &span * Scalar::ratio(2 * i as i64 + 1, 2 * grid as i64);
        let a = (&center - &half).max(lo.clone());
        let b = (&center + &half).min(hi.clone());
        let seed = Interval::new(a, b)?;
        let first_n = mixing_time(f, &seed, cap)?;
        seeds.push(SeedOutcome { seed, first_n });
    }
    let all_mixed = seeds.iter().all(|s| s.first_n.is_some());
    let max_n = if all_mixed {
        seeds.iter().filter_map(|s| s.first_n).max()
    } else {
        None
    };
    Ok(MixingReport {
        onto: f.is_onto(),
        seed_width: seed_width.clone(),
        cap,
        seeds,
        max_n,
        all_mixed,
    })
}
