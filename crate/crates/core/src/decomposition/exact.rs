//! Exact treewidth by dynamic programming over vertex subsets.
//!
//! `TW(S)` is the least possible maximum elimination degree when the vertices
//! of `S` are eliminated first, in some order:
//!
//! ```text
//! TW(∅) = 0
//! TW(S) = min over v ∈ S of max(TW(S \ v), |Q(S \ v, v)|)
//! ```
//!
//! where `Q(S, v)` is the set of vertices outside `S ∪ {v}` reachable from
//! `v` through `S`. Then `tw(G) = TW(V)`; the minimising choices give an
//! optimal elimination order.

use super::{td_from_elimination_order, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_EXACT_CAP: usize = 16;

/// Hard ceiling on the subset table (2^28 bytes).
const TABLE_LIMIT: usize = 28;

pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    exact_treewidth_capped(g, DEFAULT_EXACT_CAP)
}

pub fn exact_treewidth_capped(g: &Graph, cap: usize) -> Result<(usize, TreeDecomposition)> {
    let n = g.n();
    let cap = cap.min(TABLE_LIMIT);
    if n > cap {
        return Err(Error::ExactCapExceeded { n, cap });
    }
    if n == 0 {
        return Ok((0, TreeDecomposition::trivial(0)));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    // Size of Q(s, v): grow v's component inside s, collect its boundary.
    let q_size = |s: u32, v: usize| -> u32 {
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        let mut boundary = 0u32;
        while frontier != 0 {
            let mut next_nb = 0u32;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                next_nb |= adj[u];
            }
            boundary |= next_nb & !s;
            frontier = next_nb & s & !comp;
            comp |= frontier;
        }
        (boundary & !(1u32 << v)).count_ones()
    };

    let size = 1usize << n;
    let mut tw = vec![u8::MAX; size];
    tw[0] = 0;
    for s in 1..size as u32 {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let prev = tw[without as usize];
            if prev >= best {
                continue;
            }
            let q = q_size(without, v) as u8;
            best = best.min(prev.max(q));
        }
        tw[s as usize] = best;
    }

    // Walk back from V: the last vertex eliminated in S is a minimiser.
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let target = tw[s as usize];
        let mut rest = s;
        let v = loop {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            if tw[without as usize].max(q_size(without, v) as u8) == target {
                break v;
            }
        };
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = td_from_elimination_order(g, &order);
    let width = tw[full as usize] as usize;
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}
