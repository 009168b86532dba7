//! Strong `r`-colouring numbers.
//!
//! Under a linear order `⪯`, `x` is `(r, ⪯)`-reachable from `v` if some
//! path `v = v_0, …, v_k = x` with `k ≤ r` has `x ⪯ v ≺ v_i` for every
//! internal `v_i`. The path of length 0 counts, so `v` reaches itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_COLR_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexOrdering {
    order: Vec<usize>,
    #[serde(skip)]
    position: Vec<usize>,
}

impl VertexOrdering {
    /// `order[i]` is the `i`-th smallest vertex.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "ordering is not a permutation of 0..{n} (entry {v})"
                )));
            }
            position[v] = i;
        }
        Ok(VertexOrdering { order, position })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering::new((0..n).collect()).unwrap()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Ordering of `g.induced_subgraph(vertices)` inherited from this one.
    pub fn restrict(&self, vertices: &[usize]) -> VertexOrdering {
        let mut local: Vec<usize> = (0..vertices.len()).collect();
        local.sort_by_key(|&i| self.position[vertices[i]]);
        VertexOrdering::new(local).expect("restriction of a permutation")
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::InvalidParameter(format!(
                "ordering has {} vertices, graph has {}",
                self.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Breadth-first search through vertices later than `v`, collecting
/// endpoints no later than `v`. `later(u)` says whether `u ≻ v`.
fn reach(g: &Graph, v: usize, r: usize, later: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut out = vec![v];
    let mut frontier = vec![v];
    for _ in 0..r {
        let mut next = Vec::new();
        for &w in &frontier {
            for &u in g.neighbors(w) {
                if seen[u] {
                    continue;
                }
                seen[u] = true;
                if later(u) {
                    next.push(u);
                } else {
                    out.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out.sort_unstable();
    out
}

pub fn reachable_set(g: &Graph, ord: &VertexOrdering, v: usize, r: usize) -> Result<Vec<usize>> {
    g.check_vertex(v)?;
    ord.check(g)?;
    let pv = ord.position(v);
    Ok(reach(g, v, r, |u| ord.position(u) > pv))
}

/// Largest reachable set under `ord`; 0 for the empty graph.
pub fn eval_colr(g: &Graph, ord: &VertexOrdering, r: usize) -> Result<usize> {
    ord.check(g)?;
    Ok((0..g.n())
        .map(|v| {
            let pv = ord.position(v);
            reach(g, v, r, |u| ord.position(u) > pv).len()
        })
        .max()
        .unwrap_or(0))
}

pub fn exact_colr(g: &Graph, r: usize) -> Result<(usize, VertexOrdering)> {
    exact_colr_capped(g, r, DEFAULT_COLR_CAP)
}

/// Exact `col_r` with an optimal ordering.
///
/// What `v` reaches depends only on the set `S` of vertices after it, not
/// on their order. With `best(S)` the optimum over the vertices outside
/// `S` when `S` comes last, `best(V) = 0` and
/// `best(S) = min over v ∉ S of max(|reach(v; S)|, best(S ∪ {v}))`.
pub fn exact_colr_capped(g: &Graph, r: usize, cap: usize) -> Result<(usize, VertexOrdering)> {
    let n = g.n();
    let cap = cap.min(24);
    if n > cap {
        return Err(Error::ExactCapExceeded { n, cap });
    }
    if n == 0 {
        return Ok((0, VertexOrdering::identity(0)));
    }
    let full = (1usize << n) - 1;
    let cost = |v: usize, s: usize| reach(g, v, r, |u| s >> u & 1 == 1).len();
    let mut best = vec![0usize; 1 << n];
    for s in (0..full).rev() {
        best[s] = (0..n)
            .filter(|&v| s >> v & 1 == 0)
            .map(|v| cost(v, s).max(best[s | 1 << v]))
            .min()
            .unwrap();
    }
    let mut s = 0usize;
    let mut reversed = Vec::with_capacity(n);
    while s != full {
        let v = (0..n)
            .find(|&v| s >> v & 1 == 0 && cost(v, s).max(best[s | 1 << v]) == best[s])
            .unwrap();
        reversed.push(v);
        s |= 1 << v;
    }
    reversed.reverse();
    Ok((best[0], VertexOrdering::new(reversed)?))
}

/// Ordering of `G ⊠ H` (ids `v·|V(H)| + x`): fibres in the order of
/// `ord_g`, each fibre by ascending `H` id.
pub fn product_ordering(ord_g: &VertexOrdering, h: &Graph) -> VertexOrdering {
    let hn = h.n();
    let order = ord_g
        .order()
        .iter()
        .flat_map(|&v| (0..hn).map(move |x| v * hn + x))
        .collect();
    VertexOrdering::new(order).expect("product of permutations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::strong_product;
    use crate::testgen::{oracle, random_graph};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_colr(g: &Graph, r: usize) -> usize {
        let mut items: Vec<usize> = (0..g.n()).collect();
        let mut best = usize::MAX;
        oracle::permute(&mut items, 0, &mut |p| {
            let ord = VertexOrdering::new(p.to_vec()).unwrap();
            best = best.min(eval_colr(g, &ord, r).unwrap());
        });
        best
    }

    #[test]
    fn reachable_examples() {
        let p5 = Graph::path(5);
        let id = VertexOrdering::identity(5);
        assert_eq!(reachable_set(&p5, &id, 3, 1).unwrap(), vec![2, 3]);
        assert_eq!(reachable_set(&p5, &id, 0, 4).unwrap(), vec![0]);
        let k4 = Graph::complete(4);
        let ord = VertexOrdering::new(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(reachable_set(&k4, &ord, 1, 1).unwrap(), vec![0, 1, 2, 3]);
        assert!(reachable_set(&k4, &ord, 4, 1).is_err());
        // Through a later vertex: 1 reaches 0 via 3 when 3 ≻ 1.
        let g = Graph::from_edges(4, [(1, 3), (3, 0)]).unwrap();
        let ord = VertexOrdering::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(reachable_set(&g, &ord, 1, 2).unwrap(), vec![0, 1]);
        assert_eq!(reachable_set(&g, &ord, 1, 1).unwrap(), vec![1]);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_colr(&Graph::path(5), &VertexOrdering::identity(5), 1).unwrap(), 2);
        for r in 1..4 {
            assert_eq!(eval_colr(&Graph::complete(5), &VertexOrdering::identity(5), r).unwrap(), 5);
        }
        assert_eq!(eval_colr(&Graph::empty(4), &VertexOrdering::identity(4), 3).unwrap(), 1);
        assert!(VertexOrdering::new(vec![0, 0]).is_err());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_colr(&Graph::path(4), 1).unwrap().0, 2);
        assert_eq!(exact_colr(&Graph::complete(3), 2).unwrap().0, 3);
        let c4 = Graph::cycle(4);
        let (k, ord) = exact_colr(&c4, 1).unwrap();
        assert_eq!(k, brute_colr(&c4, 1));
        assert_eq!(k, 3);
        assert_eq!(eval_colr(&c4, &ord, 1).unwrap(), k);
        assert!(matches!(
            exact_colr(&Graph::path(11), 1),
            Err(Error::ExactCapExceeded { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn product_ordering_examples() {
        let ord = VertexOrdering::identity(2);
        assert_eq!(product_ordering(&ord, &Graph::complete(2)).order(), &[0, 1, 2, 3]);
        let ord = VertexOrdering::new(vec![2, 0, 1]).unwrap();
        assert_eq!(product_ordering(&ord, &Graph::empty(1)), ord);
        assert_eq!(product_ordering(&ord, &Graph::path(2)).order(), &[4, 5, 0, 1, 2, 3]);
    }

    #[test]
    fn ten_vertex_exact_is_quick() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_graph(10, 0.3, &mut rng);
        let (k, ord) = exact_colr(&g, 2).unwrap();
        assert_eq!(eval_colr(&g, &ord, 2).unwrap(), k);
    }

    fn graph_and_order(max_n: usize) -> impl Strategy<Value = (Graph, VertexOrdering)> {
        (1..=max_n, any::<u64>(), 0.1f64..0.7).prop_map(|(n, seed, p)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(n, p, &mut rng);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            (g, VertexOrdering::new(order).unwrap())
        })
    }

    proptest! {
        #[test]
        fn reachability_matches_path_oracle((g, ord) in graph_and_order(8), r in 0usize..4) {
            let pos: Vec<usize> = (0..g.n()).map(|v| ord.position(v)).collect();
            for v in 0..g.n() {
                let fast = reachable_set(&g, &ord, v, r).unwrap();
                let slow: Vec<usize> = oracle::reachable_by_paths(&g, &pos, v, r).into_iter().collect();
                prop_assert_eq!(fast, slow);
            }
        }

        #[test]
        fn monotone_in_r((g, ord) in graph_and_order(9), r in 1usize..4) {
            prop_assert!(eval_colr(&g, &ord, r).unwrap() <= eval_colr(&g, &ord, r + 1).unwrap());
        }

        #[test]
        fn subgraph_monotone((g, ord) in graph_and_order(8), mask in any::<u8>(), r in 1usize..4) {
            let keep: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
            let h = g.induced_subgraph(&keep);
            let sub = ord.restrict(&keep);
            prop_assert!(eval_colr(&h, &sub, r).unwrap() <= eval_colr(&g, &ord, r).unwrap());
        }

        #[test]
        fn exact_matches_brute_force((g, _) in graph_and_order(6), r in 1usize..4) {
            let (k, ord) = exact_colr(&g, r).unwrap();
            prop_assert_eq!(k, brute_colr(&g, r));
            prop_assert_eq!(eval_colr(&g, &ord, r).unwrap(), k);
        }

        #[test]
        fn product_bound((g, ord) in graph_and_order(8), hseed in any::<u64>(), hn in 1usize..5, r in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(hseed);
            let h = random_graph(hn, 0.5, &mut rng);
            let prod = strong_product(&g, &h).unwrap();
            let lhs = eval_colr(&prod, &product_ordering(&ord, &h), r).unwrap();
            let rhs = eval_colr(&g, &ord, r).unwrap() * (h.max_degree() + 2).pow(r as u32);
            prop_assert!(lhs < rhs);
        }
    }
}
