//! Independent oracles for the integration tests. None of these reuse the
//! branch engine: they work from the raw breakpoint/value lists.

#![allow(dead_code)]

use ivmap_core::{PLMap, Scalar};

/// Plain f64 linear interpolation, independent of `PLMap::eval`.
pub fn eval_f64(bps: &[f64], vals: &[f64], x: f64) -> f64 {
    let j = match bps.iter().rposition(|&b| b <= x) {
        Some(j) if j + 1 < bps.len() => j,
        Some(_) => bps.len() - 2,
        None => 0,
    };
    let (b0, b1, v0, v1) = (bps[j], bps[j + 1], vals[j], vals[j + 1]);
    v0 + (x - b0) * (v1 - v0) / (b1 - b0)
}

pub fn float_lists(f: &PLMap) -> (Vec<f64>, Vec<f64>) {
    (
        f.breakpoints().iter().map(Scalar::to_f64).collect(),
        f.values().iter().map(Scalar::to_f64).collect(),
    )
}

pub fn iterate_f64(bps: &[f64], vals: &[f64], x: f64, n: usize) -> f64 {
    (0..n).fold(x, |y, _| eval_f64(bps, vals, y))
}

/// Roots of `f^q(x) - x` bracketed on the grid `k / 2^bits`: grid points where
/// the value is exactly zero, and cells whose endpoints have strictly opposite
/// signs. Each root is reported as the midpoint of its bracket.
pub fn sign_change_roots(f: &PLMap, q: usize, bits: u32) -> Vec<f64> {
    let (bps, vals) = float_lists(f);
    let (lo, hi) = (bps[0], bps[bps.len() - 1]);
    let steps = 1u64 << bits;
    let h = (hi - lo) / steps as f64;
    let g = |x: f64| iterate_f64(&bps, &vals, x, q) - x;
    let mut roots = Vec::new();
    let mut prev = g(lo);
    if prev == 0.0 {
        roots.push(lo);
    }
    for k in 1..=steps {
        let x = lo + k as f64 * h;
        let cur = g(x);
        if cur == 0.0 {
            roots.push(x);
        } else if prev != 0.0 && (prev < 0.0) != (cur < 0.0) {
            roots.push(x - h / 2.0);
        }
        prev = cur;
    }
    roots
}

/// Exact composition `g ∘ f` as a new `PLMap`, by inserting every preimage
/// under `f` of a breakpoint of `g`.
pub fn compose(g: &PLMap, f: &PLMap) -> PLMap {
    let fb = f.breakpoints();
    let fv = f.values();
    let mut bps: Vec<Scalar> = vec![fb[0].clone()];
    for j in 0..fb.len() - 1 {
        let (x0, x1, y0, y1) = (&fb[j], &fb[j + 1], &fv[j], &fv[j + 1]);
        let (ylo, yhi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
        let mut cuts: Vec<Scalar> = g
            .breakpoints()
            .iter()
            .filter(|c| *c > ylo && *c < yhi)
            .map(|c| x0 + &((c - y0) * (x1 - x0) / (y1 - y0)))
            .collect();
        cuts.sort();
        bps.extend(cuts);
        bps.push(x1.clone());
    }
    let vals = bps.iter().map(|x| g.eval(&f.eval(x).unwrap()).unwrap()).collect();
    PLMap::new(bps, vals).unwrap()
}

/// `L(1..=n)` by explicit composition.
pub fn laps_by_composition(f: &PLMap, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut fk = f.clone();
    out.push(fk.lap_count() as u64);
    for _ in 1..n {
        fk = compose(f, &fk);
        out.push(fk.lap_count() as u64);
    }
    out
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let mut c = vec![vec![0i128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

/// Primitive cycles up to rotation of each length, by Möbius inversion of
/// the traces of powers of the adjacency matrix.
pub fn census_by_traces(adjacency: &[Vec<u64>], max_len: usize) -> Vec<u64> {
    let a: Vec<Vec<i128>> = adjacency.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut traces = vec![0i128; max_len + 1];
    let mut pow = a.clone();
    for (k, tr) in traces.iter_mut().enumerate().skip(1) {
        if k > 1 {
            pow = mat_mul(&pow, &a);
        }
        *tr = (0..a.len()).map(|i| pow[i][i]).sum();
    }
    (1..=max_len)
        .map(|l| {
            let s: i128 = (1..=l)
                .filter(|d| l % d == 0)
                .map(|d| mobius(d) as i128 * traces[l / d])
                .sum();
            assert_eq!(s % l as i128, 0);
            (s / l as i128) as u64
        })
        .collect()
}
