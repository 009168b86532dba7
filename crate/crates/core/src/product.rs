//! Cartesian and strong products, projections and coordinate layerings.
//!
//! Product vertices are encoded row-major: `(v, x)` of `A × B` gets id
//! `v * |V(B)| + x`. The encoding is public so that projections computed by
//! callers agree with the ids produced here.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A product vertex as a tuple of factor ids, in factor order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex(pub Vec<usize>);

impl ProductVertex {
    /// Row-major id of this tuple for factors of the given sizes.
    pub fn encode(&self, sizes: &[usize]) -> Result<usize> {
        if self.0.len() != sizes.len() {
            return Err(Error::InvalidParameter(format!(
                "tuple of arity {} for {} factors",
                self.0.len(),
                sizes.len()
            )));
        }
        let mut id = 0usize;
        for (&x, &size) in self.0.iter().zip(sizes) {
            if x >= size {
                return Err(Error::InvalidVertex { vertex: x, n: size });
            }
            id = id
                .checked_mul(size)
                .and_then(|v| v.checked_add(x))
                .ok_or(Error::Capacity(id, size))?;
        }
        Ok(id)
    }

    pub fn decode(mut id: usize, sizes: &[usize]) -> ProductVertex {
        let mut out = vec![0; sizes.len()];
        for (slot, &size) in out.iter_mut().zip(sizes).rev() {
            *slot = id % size;
            id /= size;
        }
        ProductVertex(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Cartesian,
    Strong,
}

/// `A ⊠ B`: distinct `(v,x)`, `(w,y)` adjacent iff each coordinate pair is
/// equal or adjacent.
pub fn strong_product(a: &Graph, b: &Graph) -> Result<Graph> {
    product(a, b, Kind::Strong)
}

/// `A □ B`: exactly one coordinate moves along a factor edge.
pub fn cartesian_product(a: &Graph, b: &Graph) -> Result<Graph> {
    product(a, b, Kind::Cartesian)
}

fn product(a: &Graph, b: &Graph, kind: Kind) -> Result<Graph> {
    let (na, nb) = (a.n(), b.n());
    let n = na.checked_mul(nb).ok_or(Error::Capacity(na, nb))?;
    let id = |v: usize, x: usize| v * nb + x;
    let mut adj = Vec::with_capacity(n);
    for v in 0..na {
        for x in 0..nb {
            let mut list = Vec::new();
            // Rows in ascending order keep each list sorted without a sort.
            let mut rows: Vec<usize> = a.neighbors(v).to_vec();
            let pos = rows.partition_point(|&w| w < v);
            rows.insert(pos, v);
            for w in rows {
                if w == v {
                    list.extend(b.neighbors(x).iter().map(|&y| id(v, y)));
                } else {
                    if kind == Kind::Strong {
                        for &y in b.neighbors(x) {
                            if y < x {
                                list.push(id(w, y));
                            }
                        }
                        list.push(id(w, x));
                        for &y in b.neighbors(x) {
                            if y > x {
                                list.push(id(w, y));
                            }
                        }
                    } else {
                        list.push(id(w, x));
                    }
                }
            }
            adj.push(list);
        }
    }
    let coords = (0..n)
        .map(|p| {
            let (v, x) = (p / nb, p % nb);
            let mut c = factor_coord(a, v);
            c.extend(factor_coord(b, x));
            c
        })
        .collect();
    Graph::from_adjacency_unchecked(adj).with_coords(coords)
}

fn factor_coord(g: &Graph, v: usize) -> Vec<i64> {
    match g.coord(v) {
        Some(c) => c.to_vec(),
        None => vec![v as i64],
    }
}

/// Projection of a coordinate-annotated graph onto one axis: the occurring
/// coordinate values with their preimage sizes `|π⁻¹(v)|`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Projection {
    pub counts: BTreeMap<i64, usize>,
}

impl Projection {
    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.counts.keys().copied()
    }

    pub fn count(&self, value: i64) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }
}

fn checked_axis(g: &Graph, axis: usize) -> Result<&[Vec<i64>]> {
    let coords = g.coords().ok_or(Error::MissingCoords)?;
    let arity = g.coord_arity().unwrap_or(0);
    if axis >= arity {
        return Err(Error::AxisOutOfRange { axis, arity });
    }
    Ok(coords)
}

pub fn project(g: &Graph, axis: usize) -> Result<Projection> {
    let coords = checked_axis(g, axis)?;
    let mut counts = BTreeMap::new();
    for c in coords {
        *counts.entry(c[axis]).or_insert(0) += 1;
    }
    Ok(Projection { counts })
}

/// Ordered partition of the vertices into layers `V_0, V_1, …` such that
/// every edge stays within a layer or joins consecutive layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layering {
    /// Coordinate value of layer 0.
    pub offset: i64,
    pub layers: Vec<Vec<usize>>,
    pub index: Vec<usize>,
}

impl Layering {
    /// Checks the partition and edge-span properties against `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        if self.index.len() != g.n() || self.layers.iter().map(Vec::len).sum::<usize>() != g.n() {
            return false;
        }
        let members_ok = self
            .layers
            .iter()
            .enumerate()
            .all(|(i, l)| l.iter().all(|&v| v < g.n() && self.index[v] == i));
        members_ok && g.edges().all(|(u, v)| self.index[u].abs_diff(self.index[v]) <= 1)
    }
}

const MAX_LAYER_SPAN: usize = 1 << 24;

/// Layers are the level sets of coordinate `axis`, layer `j` holding value
/// `offset + j`. Intermediate values with no vertices give empty layers.
pub fn layering_by_axis(g: &Graph, axis: usize) -> Result<Layering> {
    let coords = checked_axis(g, axis)?;
    if g.n() == 0 {
        return Ok(Layering {
            offset: 0,
            layers: Vec::new(),
            index: Vec::new(),
        });
    }
    let offset = coords.iter().map(|c| c[axis]).min().unwrap();
    let max = coords.iter().map(|c| c[axis]).max().unwrap();
    let span = max
        .checked_sub(offset)
        .and_then(|s| usize::try_from(s).ok())
        .and_then(|s| s.checked_add(1))
        .ok_or_else(|| Error::MalformedCoords("coordinate span too large".into()))?;
    if span > MAX_LAYER_SPAN {
        return Err(Error::MalformedCoords(format!(
            "axis {axis} spans {span} values over {} vertices",
            g.n()
        )));
    }
    let mut layers = vec![Vec::new(); span];
    let index: Vec<usize> = coords.iter().map(|c| (c[axis] - offset) as usize).collect();
    for (v, &i) in index.iter().enumerate() {
        layers[i].push(v);
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| index[u].abs_diff(index[v]) > 1) {
        return Err(Error::MalformedCoords(format!(
            "edge {u}-{v} spans more than one layer on axis {axis}"
        )));
    }
    Ok(Layering {
        offset,
        layers,
        index,
    })
}
