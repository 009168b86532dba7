use std::fmt;

use serde::Serialize;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A separation `(G1, G2)` given by vertex sides whose union is `V(G)`.
///
/// Balance uses the ceiling convention: each strict side
/// (`side1 \ side2`, `side2 \ side1`) holds at most `⌈2n/3⌉` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub n: usize,
    pub side1: Vec<usize>,
    pub side2: Vec<usize>,
    pub separator: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationViolation {
    VertexUncovered(usize),
    SeparatorMismatch,
    CrossingEdge(usize, usize),
    Unbalanced { strict1: usize, strict2: usize, limit: usize },
}

impl fmt::Display for SeparationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::VertexUncovered(v) => write!(f, "vertex {v} lies on neither side"),
            Self::SeparatorMismatch => write!(f, "separator is not the intersection of the sides"),
            Self::CrossingEdge(u, v) => write!(f, "edge {u}-{v} joins the two strict sides"),
            Self::Unbalanced { strict1, strict2, limit } => {
                write!(f, "strict sides {strict1} and {strict2} exceed {limit}")
            }
        }
    }
}

/// `⌈2n/3⌉`.
pub fn balance_limit(n: usize) -> usize {
    (2 * n).div_ceil(3)
}

impl Separation {
    /// Separation with the given separator and strict sides.
    pub fn from_parts(n: usize, separator: Vec<usize>, strict1: Vec<usize>, strict2: Vec<usize>) -> Self {
        let mut separator = separator;
        separator.sort_unstable();
        separator.dedup();
        let join = |strict: Vec<usize>| {
            let mut side = strict;
            side.extend_from_slice(&separator);
            side.sort_unstable();
            side.dedup();
            side
        };
        Separation {
            n,
            side1: join(strict1),
            side2: join(strict2),
            separator,
        }
    }

    pub fn order(&self) -> usize {
        self.separator.len()
    }

    pub fn strict1(&self) -> usize {
        self.side1.len() - self.separator.len()
    }

    pub fn strict2(&self) -> usize {
        self.side2.len() - self.separator.len()
    }

    pub fn is_balanced(&self) -> bool {
        let limit = balance_limit(self.n);
        self.strict1() <= limit && self.strict2() <= limit
    }

    /// Checks that this is a balanced separation of `g`.
    pub fn verify(&self, g: &Graph) -> Result<(), SeparationViolation> {
        let n = g.n();
        let mut on1 = vec![false; n];
        let mut on2 = vec![false; n];
        for &v in self.side1.iter().filter(|&&v| v < n) {
            on1[v] = true;
        }
        for &v in self.side2.iter().filter(|&&v| v < n) {
            on2[v] = true;
        }
        if let Some(v) = (0..n).find(|&v| !on1[v] && !on2[v]) {
            return Err(SeparationViolation::VertexUncovered(v));
        }
        let both: Vec<usize> = (0..n).filter(|&v| on1[v] && on2[v]).collect();
        if both != self.separator || self.n != n {
            return Err(SeparationViolation::SeparatorMismatch);
        }
        if let Some((u, v)) = g
            .edges()
            .find(|&(u, v)| (on1[u] && !on2[u] && on2[v] && !on1[v]) || (on2[u] && !on1[u] && on1[v] && !on2[v]))
        {
            return Err(SeparationViolation::CrossingEdge(u, v));
        }
        if !self.is_balanced() {
            return Err(SeparationViolation::Unbalanced {
                strict1: self.strict1(),
                strict2: self.strict2(),
                limit: balance_limit(n),
            });
        }
        Ok(())
    }
}

/// Splits the components left after deleting `separator` into two groups,
/// largest first, until the first group reaches a third of the remainder.
/// When no component exceeds `n/2` both groups stay within `⌈2n/3⌉`.
pub(crate) fn group_components(n: usize, separator: Vec<usize>, mut comps: Vec<Vec<usize>>) -> Separation {
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let rest: usize = comps.iter().map(Vec::len).sum();
    let mut strict1 = Vec::new();
    let mut strict2 = Vec::new();
    for comp in comps {
        if 3 * strict1.len() < rest {
            strict1.extend(comp);
        } else {
            strict2.extend(comp);
        }
    }
    Separation::from_parts(n, separator, strict1, strict2)
}

/// Balanced separation whose separator is a single bag of `td`.
///
/// Starting from node 0, walk towards any component of `G - B_x` holding
/// more than half the vertices; the walk stops at a bag whose removal leaves
/// only components of size at most `n/2`, whose components are then grouped
/// into the two sides.
pub fn separator_from_td(g: &Graph, td: &TreeDecomposition) -> Result<Separation> {
    td.validate(g)
        .map_err(|v| Error::InvalidDecomposition(v.to_string()))?;
    let n = g.n();
    let tree = td.tree_adjacency();
    let bags = td.bags();
    let mut holder = vec![usize::MAX; n];
    for (x, bag) in bags.iter().enumerate() {
        for &v in bag {
            if holder[v] == usize::MAX {
                holder[v] = x;
            }
        }
    }
    let comps_without = |x: usize| {
        let mut keep = vec![true; n];
        for &v in &bags[x] {
            keep[v] = false;
        }
        g.components_where(&keep)
    };

    let mut visited = vec![false; bags.len()];
    let mut x = 0;
    loop {
        visited[x] = true;
        let comps = comps_without(x);
        let heavy = comps.iter().find(|c| 2 * c.len() > n);
        let Some(heavy) = heavy else {
            return Ok(group_components(n, bags[x].clone(), comps));
        };
        // The heavy component avoids B_x, so all its bags sit in one branch
        // of the tree at x; step to the neighbour leading there.
        let target = holder[heavy[0]];
        let step = first_step(&tree, x, target);
        if visited[step] {
            break;
        }
        x = step;
    }
    // Not reachable for a valid decomposition; scan all bags to be sure.
    (0..bags.len())
        .map(|x| (x, comps_without(x)))
        .find(|(_, comps)| comps.iter().all(|c| 2 * c.len() <= n))
        .map(|(x, comps)| group_components(n, bags[x].clone(), comps))
        .ok_or_else(|| Error::InvalidDecomposition("no balanced bag found".into()))
}

fn first_step(tree: &[Vec<usize>], from: usize, to: usize) -> usize {
    let mut parent = vec![usize::MAX; tree.len()];
    parent[from] = from;
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &y in &tree[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut cur = to;
    while parent[cur] != from {
        cur = parent[cur];
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{exact_treewidth, heuristic_treewidth};
    use crate::product::cartesian_product;

    #[test]
    fn path_nine() {
        let g = Graph::path(9);
        let bags = (0..8).map(|i| vec![i, i + 1]).collect();
        let td = TreeDecomposition::new(bags, (1..8).map(|i| (i - 1, i)).collect());
        let sep = separator_from_td(&g, &td).unwrap();
        assert!(sep.order() <= 2);
        assert!(sep.strict1() <= 6 && sep.strict2() <= 6);
        assert_eq!(sep.verify(&g), Ok(()));
    }

    #[test]
    fn complete_graph_single_bag() {
        let g = Graph::complete(4);
        let sep = separator_from_td(&g, &TreeDecomposition::trivial(4)).unwrap();
        assert_eq!(sep.separator, vec![0, 1, 2, 3]);
        assert_eq!((sep.strict1(), sep.strict2()), (0, 0));
        assert_eq!(sep.verify(&g), Ok(()));
    }

    #[test]
    fn grid_4x4() {
        let g = cartesian_product(&Graph::path(4), &Graph::path(4)).unwrap();
        let (w, td) = exact_treewidth(&g).unwrap();
        let sep = separator_from_td(&g, &td).unwrap();
        assert!(sep.order() <= w + 1 && sep.order() <= 5);
        assert!(sep.strict1() <= 11 && sep.strict2() <= 11);
        assert_eq!(sep.verify(&g), Ok(()));
    }

    #[test]
    fn long_path_walk_from_far_end() {
        let g = Graph::path(40);
        let (_, td) = heuristic_treewidth(&g);
        let sep = separator_from_td(&g, &td).unwrap();
        assert_eq!(sep.verify(&g), Ok(()));
        assert!(sep.order() <= 2);
    }

    #[test]
    fn rejects_invalid_td() {
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert!(matches!(
            separator_from_td(&Graph::complete(3), &td),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn verify_catches_problems() {
        let g = Graph::path(3);
        let crossing = Separation::from_parts(3, vec![], vec![0], vec![1, 2]);
        assert_eq!(crossing.verify(&g), Err(SeparationViolation::CrossingEdge(0, 1)));
        let lopsided = Separation::from_parts(3, vec![], vec![0, 1, 2], vec![]);
        assert!(matches!(lopsided.verify(&g), Err(SeparationViolation::Unbalanced { .. })));
        let short = Separation::from_parts(3, vec![1], vec![0], vec![]);
        assert_eq!(short.verify(&g), Err(SeparationViolation::VertexUncovered(2)));
        assert_eq!(balance_limit(16), 11);
        assert_eq!(balance_limit(3), 2);
    }
}
