//! Covering graphs of pseudo-partitions and primitive-cycle enumeration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::NamedInterval;
use crate::plmap::PLMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// `f(A) ⊇ B`.
    Full,
    /// `f(A)` meets the interior of `B` without containing it.
    Partial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringGraph {
    pub vertices: Vec<NamedInterval>,
    pub edges: Vec<Edge>,
}

/// Check that `parts` covers the domain of `f` with pairwise disjoint
/// interiors and no degenerate member.
pub fn check_pseudo_partition(f: &PLMap, parts: &[NamedInterval]) -> Result<()> {
    let eps = f.margin();
    if parts.is_empty() {
        return Err(Error::Partition("empty family".into()));
    }
    let mut sorted: Vec<&NamedInterval> = parts.iter().collect();
    sorted.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
    if let Some(d) = sorted.iter().find(|n| n.interval.is_degenerate()) {
        return Err(Error::Partition(format!("{} is degenerate", d.label)));
    }
    if !sorted[0].interval.lo().eq_eps(f.lo(), eps) {
        return Err(Error::Partition(format!("gap at the left end, before {}", sorted[0].label)));
    }
    let last = sorted[sorted.len() - 1];
    if !last.interval.hi().eq_eps(f.hi(), eps) {
        return Err(Error::Partition(format!("gap at the right end, after {}", last.label)));
    }
    for w in sorted.windows(2) {
        let (a, b) = (&w[0].interval, &w[1].interval);
        match a.hi().cmp_eps(b.lo(), eps) {
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Less => {
                return Err(Error::Partition(format!("gap between {} and {}", w[0].label, w[1].label)))
            }
            std::cmp::Ordering::Greater => {
                return Err(Error::Partition(format!("{} overlaps {}", w[0].label, w[1].label)))
            }
        }
    }
    Ok(())
}

pub fn build_covering_graph(f: &PLMap, partition: &[NamedInterval]) -> Result<CoveringGraph> {
    check_pseudo_partition(f, partition)?;
    let eps = f.margin();
    let mut edges = Vec::new();
    for (i, a) in partition.iter().enumerate() {
        let image = f.image(&a.interval)?;
        for (j, b) in partition.iter().enumerate() {
            if !image.meets_interior(&b.interval, eps) {
                continue;
            }
            let kind = if image.covers(&b.interval, eps) {
                EdgeKind::Full
            } else {
                EdgeKind::Partial
            };
            edges.push(Edge { from: i, to: j, kind });
        }
    }
    Ok(CoveringGraph {
        vertices: partition.to_vec(),
        edges,
    })
}

impl CoveringGraph {
    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            out[e.from].push(e.to);
        }
        out
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.from][e.to] = 1;
        }
        a
    }

    /// One representative per rotation class of primitive cycles of length
    /// `<= max_len`, as vertex sequences `v_0 -> v_1 -> ... -> v_0`. Each
    /// representative is its least rotation.
    pub fn primitive_cycles(&self, max_len: usize) -> Vec<Vec<usize>> {
        let succ = self.successors();
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(max_len);
        for start in 0..self.vertices.len() {
            path.clear();
            path.push(start);
            extend_walk(&succ, start, max_len, &mut path, &mut out);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Number of primitive cycles (up to rotation) of each length.
    pub fn primitive_cycle_census(&self, max_len: usize) -> BTreeMap<usize, u64> {
        let mut census: BTreeMap<usize, u64> = (1..=max_len).map(|l| (l, 0)).collect();
        for c in self.primitive_cycles(max_len) {
            *census.entry(c.len()).or_default() += 1;
        }
        census
    }

    /// Graphviz rendering: solid arrows for full coverings, dashed for
    /// partial ones.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph covering {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{}\" [label=\"{}\\n{}\"];", v.label, v.label, v.interval);
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Full => "solid",
                EdgeKind::Partial => "dashed",
            };
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [style={}];",
                self.vertices[e.from].label, self.vertices[e.to].label, style
            );
        }
        s.push_str("}\n");
        s
    }
}

fn extend_walk(succ: &[Vec<usize>], start: usize, max_len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().expect("walk is never empty");
    for &next in &succ[last] {
        if next == start && is_lyndon(path) {
            out.push(path.clone());
        }
        if next >= start && path.len() < max_len {
            path.push(next);
            extend_walk(succ, start, max_len, path, out);
            path.pop();
        }
    }
}

/// Strictly smaller than each of its nontrivial rotations.
fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rotated = w[r..].iter().chain(&w[..r]);
        w.iter().lt(rotated)
    })
}
