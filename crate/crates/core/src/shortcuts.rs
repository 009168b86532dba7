//! Shortcut systems and the supergraph `G^P`.
//!
//! A `(k, d)`-shortcut system is a family of paths of length at most `k`,
//! each with distinct endpoints, such that every vertex is internal to at
//! most `d` of them. `G^P` adds an edge between the endpoints of each path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortcutSystem {
    pub k: usize,
    pub d: usize,
    pub paths: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShortcutViolation {
    InvalidVertex { path: usize, vertex: usize },
    TooLong { path: usize, length: usize, k: usize },
    SameEndpoints { path: usize },
    RepeatedVertex { path: usize, vertex: usize },
    MissingEdge { path: usize, u: usize, v: usize },
    Overused { vertex: usize, usage: usize, d: usize },
}

impl fmt::Display for ShortcutViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidVertex { path, vertex } => write!(f, "path {path}: vertex {vertex} out of range"),
            Self::TooLong { path, length, k } => write!(f, "path {path} has length {length} > k = {k}"),
            Self::SameEndpoints { path } => write!(f, "path {path} does not have distinct endpoints"),
            Self::RepeatedVertex { path, vertex } => write!(f, "path {path} repeats vertex {vertex}"),
            Self::MissingEdge { path, u, v } => write!(f, "path {path} uses non-edge {u}-{v}"),
            Self::Overused { vertex, usage, d } => {
                write!(f, "vertex {vertex} is internal to {usage} paths, more than d = {d}")
            }
        }
    }
}

impl ShortcutSystem {
    pub fn empty(k: usize, d: usize) -> Self {
        ShortcutSystem { k, d, paths: vec![] }
    }

    /// Number of paths using each vertex as an internal vertex.
    pub fn usage(&self, n: usize) -> Vec<usize> {
        let mut usage = vec![0; n];
        for p in &self.paths {
            for &v in p.iter().skip(1).take(p.len().saturating_sub(2)) {
                if v < n {
                    usage[v] += 1;
                }
            }
        }
        usage
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(input: &str) -> Result<Self> {
        Ok(serde_json::from_str(input)?)
    }
}

pub fn validate_shortcuts(g: &Graph, s: &ShortcutSystem) -> Result<(), ShortcutViolation> {
    let n = g.n();
    for (i, p) in s.paths.iter().enumerate() {
        if let Some(&vertex) = p.iter().find(|&&v| v >= n) {
            return Err(ShortcutViolation::InvalidVertex { path: i, vertex });
        }
        let length = p.len().saturating_sub(1);
        if length > s.k {
            return Err(ShortcutViolation::TooLong { path: i, length, k: s.k });
        }
        if p.len() < 2 || p[0] == p[p.len() - 1] {
            return Err(ShortcutViolation::SameEndpoints { path: i });
        }
        let mut seen = vec![false; n];
        for &v in p {
            if std::mem::replace(&mut seen[v], true) {
                return Err(ShortcutViolation::RepeatedVertex { path: i, vertex: v });
            }
        }
        if let Some(w) = p.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(ShortcutViolation::MissingEdge {
                path: i,
                u: w[0],
                v: w[1],
            });
        }
    }
    let usage = s.usage(n);
    if let Some(vertex) = (0..n).find(|&v| usage[v] > s.d) {
        return Err(ShortcutViolation::Overused {
            vertex,
            usage: usage[vertex],
            d: s.d,
        });
    }
    Ok(())
}

/// `G^P`: `g` plus an edge joining the ends of every path.
pub fn apply_shortcuts(g: &Graph, s: &ShortcutSystem) -> Result<Graph> {
    validate_shortcuts(g, s).map_err(|v| Error::InvalidShortcuts(v.to_string()))?;
    let extra = s.paths.iter().map(|p| (p[0], p[p.len() - 1]));
    let out = Graph::from_edges(g.n(), g.edges().chain(extra))?;
    Ok(match g.coords() {
        Some(c) => out.with_coords(c.to_vec())?,
        None => out,
    })
}

/// A `(k, 2kΔ^k)`-shortcut system whose `G^P` is `G^k`: for each pair
/// `v < w` at distance between 2 and `k`, the shortest path that steps to
/// the smallest-id vertex one closer to `v` at every step back from `w`.
pub fn power_shortcut_system(g: &Graph, k: usize) -> ShortcutSystem {
    let delta = g.max_degree();
    let d = u32::try_from(k)
        .ok()
        .and_then(|e| delta.checked_pow(e))
        .and_then(|p| p.checked_mul(2 * k))
        .unwrap_or(usize::MAX);
    let mut paths = Vec::new();
    if k >= 2 {
        for v in 0..g.n() {
            let dist = g.distances_within(v, k);
            for w in v + 1..g.n() {
                let Some(dw) = dist[w] else { continue };
                if dw < 2 {
                    continue;
                }
                let mut path = vec![w];
                let mut cur = w;
                while cur != v {
                    let dc = dist[cur].unwrap();
                    cur = *g
                        .neighbors(cur)
                        .iter()
                        .find(|&&u| dist[u] == Some(dc - 1))
                        .expect("BFS parent exists");
                    path.push(cur);
                }
                path.reverse();
                paths.push(path);
            }
        }
    }
    ShortcutSystem { k, d, paths }
}
