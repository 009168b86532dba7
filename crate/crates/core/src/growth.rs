//! Balls, polynomial-growth checks, the ball-size bound for subgraphs of
//! `H ⊠ ℤ^d`, and graph powers.

use num_bigint::BigUint;

use crate::error::Result;
use crate::graph::Graph;

/// Closed ball `N^r[v]`, sorted ascending.
pub fn ball(g: &Graph, v: usize, r: usize) -> Result<Vec<usize>> {
    g.check_vertex(v)?;
    Ok(g.distances_within(v, r)
        .iter()
        .enumerate()
        .filter_map(|(u, d)| d.map(|_| u))
        .collect())
}

/// Sphere `N^r(v)`: vertices at distance exactly `r`.
pub fn sphere(g: &Graph, v: usize, r: usize) -> Result<Vec<usize>> {
    g.check_vertex(v)?;
    Ok(g.distances_within(v, r)
        .iter()
        .enumerate()
        .filter_map(|(u, d)| (*d == Some(r)).then_some(u))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthViolation {
    pub vertex: usize,
    pub r: usize,
    pub size: usize,
}

/// Checks `|N^r[v]| <= r^c` for every vertex and every `r` in
/// `2..=diameter`. Returns the lexicographically first `(v, r)` that fails.
pub fn growth_check(g: &Graph, c: f64) -> Result<(), GrowthViolation> {
    let diameter = g.diameter();
    for v in 0..g.n() {
        let dist = g.distances_from(v);
        let mut by_radius = vec![0usize; diameter + 1];
        for d in dist.into_iter().flatten() {
            by_radius[d] += 1;
        }
        let mut size = 0;
        for (r, count) in by_radius.iter().enumerate() {
            size += count;
            if r >= 2 && size as f64 > (r as f64).powf(c) {
                return Err(GrowthViolation { vertex: v, r, size });
            }
        }
    }
    Ok(())
}

/// `(1+Δ)^k (2r+1)^{(k+1)(d+1)}`: an upper bound on the order of any
/// connected subgraph of `H ⊠ ℤ^d` with radius at most `r` and maximum
/// degree at most `Δ`, where `H` has pathwidth at most `k`.
pub fn ball_size_bound(k: u32, delta: u64, r: u64, d: u32) -> BigUint {
    let base = BigUint::from(delta) + 1u32;
    let side = BigUint::from(r) * 2u32 + 1u32;
    base.pow(k) * side.pow((k + 1) * (d + 1))
}

/// `G^k`: `vw` is an edge iff `1 <= d_G(v, w) <= k`.
pub fn graph_power(g: &Graph, k: usize) -> Graph {
    let adj = (0..g.n())
        .map(|v| {
            g.distances_within(v, k)
                .iter()
                .enumerate()
                .filter_map(|(u, d)| (u != v && d.is_some()).then_some(u))
                .collect()
        })
        .collect();
    Graph::from_adjacency_unchecked(adj)
}
