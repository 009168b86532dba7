use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::Graph;

/// Builds the tree decomposition induced by eliminating vertices in `order`.
///
/// Node `i` holds `order[i]` together with its not-yet-eliminated neighbours
/// in the fill-in graph, and hangs off the node of the earliest-eliminated of
/// those neighbours. Roots of separate components are chained together.
pub fn td_from_elimination_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "elimination order must be a permutation");
    if n == 0 {
        return TreeDecomposition::trivial(0);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let higher: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] > i).collect();
        for (a, &x) in higher.iter().enumerate() {
            for &y in &higher[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        parent[i] = higher.iter().map(|&w| pos[w]).min();
        let mut bag = higher;
        bag.push(v);
        bags.push(bag);
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut last_root: Option<usize> = None;
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => edges.push((i, *p)),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    TreeDecomposition::new(bags, edges)
}

/// Min-fill elimination: repeatedly eliminate the vertex whose elimination
/// adds the fewest fill edges, breaking ties by degree and then by id.
pub fn heuristic_treewidth(g: &Graph) -> (usize, TreeDecomposition) {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let fill = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (a, &x) in nb.iter().enumerate() {
            for &y in &nb[a + 1..] {
                if !adj[x].contains(&y) {
                    missing += 1;
                }
            }
        }
        missing
    };
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill(&adj, v), adj[v].len(), v))
            .unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (a, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    let td = td_from_elimination_order(g, &order);
    (td.width(), td)
}
