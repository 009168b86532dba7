//! Tree and path decompositions.

mod elimination;
mod exact;
mod separation;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::product::ProductVertex;

pub use elimination::{heuristic_treewidth, td_from_elimination_order};
pub use exact::{exact_treewidth, exact_treewidth_capped, DEFAULT_EXACT_CAP};
pub use separation::{balance_limit, separator_from_td, Separation, SeparationViolation};

/// Bags indexed by the nodes of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

/// Ways a tree decomposition can fail to be valid, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NotATree(String),
    VertexOutOfRange { bag: usize, vertex: usize },
    EdgeUncovered(usize, usize),
    VertexMissing(usize),
    VertexSubtreeDisconnected(usize),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree(why) => write!(f, "index graph is not a tree: {why}"),
            TdViolation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} holds out-of-range vertex {vertex}")
            }
            TdViolation::EdgeUncovered(u, v) => write!(f, "edge {u}-{v} is in no bag"),
            TdViolation::VertexMissing(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::VertexSubtreeDisconnected(v) => {
                write!(f, "bags containing vertex {v} do not induce a connected subtree")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TdJson {
    bags: Vec<Vec<usize>>,
    #[serde(default)]
    tree_edges: Vec<[usize; 2]>,
    #[serde(default)]
    width: Option<usize>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; tree edges are stored as given.
    pub fn new(mut bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
        }
        TreeDecomposition { bags, tree_edges }
    }

    /// One bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        Self::new(vec![(0..n).collect()], Vec::new())
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    /// Largest bag size minus one (0 for a decomposition of the empty graph).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// One more than the largest vertex id mentioned in any bag.
    pub fn vertex_count(&self) -> usize {
        self.bags
            .iter()
            .filter_map(|b| b.last())
            .max()
            .map_or(0, |&v| v + 1)
    }

    pub(crate) fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// Checks the tree structure and both decomposition axioms against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), TdViolation> {
        let nodes = self.bags.len();
        if nodes == 0 {
            return Err(TdViolation::NotATree("no nodes".into()));
        }
        if self.tree_edges.len() != nodes - 1 {
            return Err(TdViolation::NotATree(format!(
                "{} edges on {nodes} nodes",
                self.tree_edges.len()
            )));
        }
        if let Some(&(a, b)) = self.tree_edges.iter().find(|&&(a, b)| a >= nodes || b >= nodes || a == b) {
            return Err(TdViolation::NotATree(format!("bad edge {a}-{b}")));
        }
        let tree = self.tree_adjacency();
        let mut seen = vec![false; nodes];
        seen[0] = true;
        let mut stack = vec![0];
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &tree[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached != nodes {
            return Err(TdViolation::NotATree("disconnected".into()));
        }

        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Err(TdViolation::VertexOutOfRange { bag: x, vertex: v });
                }
                holders[v].push(x);
            }
        }
        for (u, v) in g.edges() {
            let covered = holders[u]
                .iter()
                .any(|&x| self.bags[x].binary_search(&v).is_ok());
            if !covered {
                return Err(TdViolation::EdgeUncovered(u, v));
            }
        }
        let mut mark = vec![false; nodes];
        for (v, xs) in holders.iter().enumerate() {
            let Some(&start) = xs.first() else {
                return Err(TdViolation::VertexMissing(v));
            };
            for &x in xs {
                mark[x] = true;
            }
            let mut count = 0;
            let mut stack = vec![start];
            mark[start] = false;
            while let Some(x) = stack.pop() {
                count += 1;
                for &y in &tree[x] {
                    if mark[y] {
                        mark[y] = false;
                        stack.push(y);
                    }
                }
            }
            if count != xs.len() {
                for &x in xs {
                    mark[x] = false;
                }
                return Err(TdViolation::VertexSubtreeDisconnected(v));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let raw = TdJson {
            bags: self.bags.clone(),
            tree_edges: self.tree_edges.iter().map(|&(a, b)| [a, b]).collect(),
            width: Some(self.width()),
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    /// Parses the JSON form. A declared width, if present, must match the
    /// bags.
    pub fn from_json(input: &str) -> Result<Self> {
        let raw: TdJson = serde_json::from_str(input)?;
        let td = Self::new(raw.bags, raw.tree_edges.iter().map(|e| (e[0], e[1])).collect());
        if let Some(declared) = raw.width.filter(|&w| w != td.width()) {
            return Err(Error::Parse(format!(
                "declared width {declared} but bags give {}",
                td.width()
            )));
        }
        Ok(td)
    }
}

impl Serialize for TreeDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TdJson {
            bags: self.bags.clone(),
            tree_edges: self.tree_edges.iter().map(|&(a, b)| [a, b]).collect(),
            width: Some(self.width()),
        }
        .serialize(s)
    }
}

/// A tree decomposition whose index tree is the path `0 - 1 - … - (k-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn to_tree(&self) -> TreeDecomposition {
        let edges = (1..self.bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(self.bags.clone(), edges)
    }

    pub fn validate(&self, g: &Graph) -> Result<(), TdViolation> {
        self.to_tree().validate(g)
    }
}

/// Decomposition of `Q_1 ⊠ … ⊠ Q_d ⊠ H` where `Q_i` is the path on
/// `q_sizes[i]` vertices: each vertex of `H` in a bag is replaced by its
/// whole copy of the grid. Product ids follow the row-major encoding with the
/// `H` coordinate last, matching `strong_product(Q_1 ⊠ … ⊠ Q_d, H)`.
pub fn product_td(h_td: &TreeDecomposition, q_sizes: &[usize]) -> Result<TreeDecomposition> {
    if let Some(i) = q_sizes.iter().position(|&q| q == 0) {
        return Err(Error::InvalidParameter(format!("path {i} has no vertices")));
    }
    let h_n = h_td.vertex_count().max(1);
    let cells = q_sizes
        .iter()
        .try_fold(1usize, |acc, &q| acc.checked_mul(q).ok_or(Error::Capacity(acc, q)))?;
    cells.checked_mul(h_n).ok_or(Error::Capacity(cells, h_n))?;
    let mut sizes = q_sizes.to_vec();
    sizes.push(h_n);
    let bags = h_td
        .bags
        .iter()
        .map(|bag| {
            let mut out = Vec::with_capacity(bag.len() * cells);
            for cell in 0..cells {
                let mut tuple = ProductVertex::decode(cell, q_sizes).0;
                tuple.push(0);
                for &h in bag {
                    *tuple.last_mut().unwrap() = h;
                    out.push(ProductVertex(tuple.clone()).encode(&sizes)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, h_td.tree_edges.clone()))
}
