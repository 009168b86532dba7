//! Unit-disc and nearest-neighbour graphs, and the embedding of unit-disc
//! graphs into `ℤ^d ⊠ K_t`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Points in `ℝ^d`. Duplicates are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    d: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(d: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::CoordArity {
                    expected: d,
                    vertex: i,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinitePoint(i));
            }
        }
        Ok(PointSet { d, points })
    }

    /// One point per record, one column per dimension, no header.
    pub fn from_csv(input: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(input.as_bytes());
        let mut points = Vec::new();
        for record in reader.records() {
            let record = record?;
            let p = record
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            points.push(p);
        }
        let d = points.first().map_or(0, Vec::len);
        PointSet::new(d, points).map_err(|e| match e {
            Error::NonFinitePoint(i) => Error::Parse(format!("point {i} is not finite")),
            other => Error::Parse(other.to_string()),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn dist2(&self, i: usize, j: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    fn cell(&self, i: usize) -> Vec<i64> {
        self.points[i].iter().map(|x| x.floor() as i64).collect()
    }
}

/// Points adjacent iff their Euclidean distance is at most 1. Candidate
/// pairs come from neighbouring unit cells; the test is on squared
/// distances.
pub fn unit_disc_graph(ps: &PointSet) -> Graph {
    let n = ps.len();
    let mut edges = Vec::new();
    if ps.d > 6 {
        for i in 0..n {
            for j in i + 1..n {
                if ps.dist2(i, j) <= 1.0 {
                    edges.push((i, j));
                }
            }
        }
    } else {
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for i in 0..n {
            buckets.entry(ps.cell(i)).or_default().push(i);
        }
        let offsets: Vec<Vec<i64>> = (0..3usize.pow(ps.d as u32))
            .map(|mut code| {
                (0..ps.d)
                    .map(|_| {
                        let o = (code % 3) as i64 - 1;
                        code /= 3;
                        o
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            let cell = ps.cell(i);
            for off in &offsets {
                let Some(other): Option<Vec<i64>> = cell.iter().zip(off).map(|(c, o)| c.checked_add(*o)).collect()
                else {
                    continue;
                };
                for &j in buckets.get(&other).into_iter().flatten() {
                    if j > i && ps.dist2(i, j) <= 1.0 {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    Graph::from_edges(n, edges).expect("indices in range")
}

/// Symmetric closure of "w is among the k nearest points to v", ties broken
/// by lower index.
pub fn knn_graph(ps: &PointSet, k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = ps.len();
    let mut edges = Vec::new();
    for v in 0..n {
        let mut others: Vec<(f64, usize)> = (0..n).filter(|&w| w != v).map(|w| (ps.dist2(v, w), w)).collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        edges.extend(others.into_iter().take(k).map(|(_, w)| (v, w)));
    }
    Graph::from_edges(n, edges)
}

/// Image of each point in `ℤ^d ⊠ K_t`: its unit cell followed by a label in
/// `1..=t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEmbedding {
    pub d: usize,
    pub k: usize,
    pub t: usize,
    pub images: Vec<Vec<i64>>,
    /// Points per cell, keyed by the cell's coordinates.
    pub cells: BTreeMap<String, Vec<usize>>,
    /// Largest number of points in a single sub-cube.
    pub max_subcube_occupancy: usize,
}

/// Smallest `s` with `s² ≥ d`.
pub fn ceil_sqrt(d: usize) -> usize {
    let mut s = (d as f64).sqrt() as usize;
    while s * s < d {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= d {
        s -= 1;
    }
    s
}

/// Embeds the unit-disc graph of `ps` into `ℤ^d ⊠ K_t`, `t = k⌈√d⌉^d`.
///
/// Each unit cell splits into `⌈√d⌉^d` sub-cubes of side `1/⌈√d⌉`. A
/// sub-cube has diameter at most 1, so its points form a clique; if one
/// holds more than `k` points the graph has a `(k+1)`-clique and the call
/// fails. Otherwise a cell holds at most `t` points, which receive labels
/// `1, 2, …` in ascending index order.
pub fn embed_unit_disc(ps: &PointSet, k: usize) -> Result<ProductEmbedding> {
    if k == 0 {
        return Err(Error::InvalidParameter("clique bound k must be at least 1".into()));
    }
    let d = ps.d;
    let s = ceil_sqrt(d).max(1);
    let t = u32::try_from(d)
        .ok()
        .and_then(|e| s.checked_pow(e))
        .and_then(|v| v.checked_mul(k))
        .ok_or_else(|| Error::InvalidParameter("t = k * ceil(sqrt d)^d overflows".into()))?;

    let mut subcubes: BTreeMap<(Vec<i64>, Vec<usize>), Vec<usize>> = BTreeMap::new();
    let mut by_cell: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for i in 0..ps.len() {
        let cell = ps.cell(i);
        let sub: Vec<usize> = ps.points[i]
            .iter()
            .zip(&cell)
            .map(|(&x, &p)| (((x - p as f64) * s as f64).floor().max(0.0) as usize).min(s - 1))
            .collect();
        subcubes.entry((cell.clone(), sub)).or_default().push(i);
        by_cell.entry(cell).or_default().push(i);
    }
    let mut max_occ = 0;
    for ((cell, sub), members) in &subcubes {
        max_occ = max_occ.max(members.len());
        if members.len() > k {
            return Err(Error::CliqueBound {
                cell: cell.clone(),
                subcube: sub.clone(),
                count: members.len(),
                k,
            });
        }
    }
    let mut images = vec![Vec::new(); ps.len()];
    let mut cells = BTreeMap::new();
    for (cell, members) in by_cell {
        debug_assert!(members.len() <= t);
        for (label, &i) in members.iter().enumerate() {
            let mut image = cell.clone();
            image.push(label as i64 + 1);
            images[i] = image;
        }
        let key = cell.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        cells.insert(key, members);
    }
    Ok(ProductEmbedding {
        d,
        k,
        t,
        images,
        cells,
        max_subcube_occupancy: max_occ,
    })
}

impl ProductEmbedding {
    /// Checks that the images are distinct, labels lie in `1..=t`, and
    /// every edge of `g` maps to an edge of `ℤ^d ⊠ K_t`.
    pub fn verify(&self, g: &Graph) -> Result<(), String> {
        if self.images.len() != g.n() {
            return Err(format!("{} images for {} vertices", self.images.len(), g.n()));
        }
        let mut seen = HashMap::new();
        for (v, img) in self.images.iter().enumerate() {
            if img.len() != self.d + 1 {
                return Err(format!("image of {v} has arity {}", img.len()));
            }
            let label = img[self.d];
            if label < 1 || label as usize > self.t {
                return Err(format!("label {label} of vertex {v} outside 1..={}", self.t));
            }
            if let Some(u) = seen.insert(img.clone(), v) {
                return Err(format!("vertices {u} and {v} share image {img:?}"));
            }
        }
        for (u, v) in g.edges() {
            let (a, b) = (&self.images[u], &self.images[v]);
            if (0..self.d).any(|i| (a[i] - b[i]).abs() > 1) {
                return Err(format!("edge {u}-{v} maps to non-adjacent cells"));
            }
        }
        Ok(())
    }

    pub fn max_cell_occupancy(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::new(1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn udg_examples() {
        let g = unit_disc_graph(&line(&[0.0, 0.5, 2.0]));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(unit_disc_graph(&line(&[1.0, 1.0])).num_edges(), 1);
        assert_eq!(unit_disc_graph(&line(&[3.0])).n(), 1);
        // Distance exactly 1 is an edge, across a cell boundary.
        assert_eq!(unit_disc_graph(&line(&[0.5, 1.5])).num_edges(), 1);
    }

    #[test]
    fn embed_line_example() {
        let ps = line(&[0.0, 0.5, 2.0]);
        let emb = embed_unit_disc(&ps, 2).unwrap();
        assert_eq!(emb.t, 2);
        assert_eq!(emb.images, vec![vec![0, 1], vec![0, 2], vec![2, 1]]);
        assert_eq!(emb.cells.keys().collect::<Vec<_>>(), vec!["0", "2"]);
        assert_eq!(emb.verify(&unit_disc_graph(&ps)), Ok(()));
    }

    #[test]
    fn embed_empty_and_clique_bound() {
        let emb = embed_unit_disc(&PointSet::new(2, vec![]).unwrap(), 1).unwrap();
        assert!(emb.images.is_empty());
        let ps = PointSet::new(2, vec![vec![0.1, 0.1], vec![0.2, 0.2], vec![0.3, 0.1]]).unwrap();
        match embed_unit_disc(&ps, 2) {
            Err(Error::CliqueBound { cell, subcube, count, k }) => {
                assert_eq!((cell, subcube, count, k), (vec![0, 0], vec![0, 0], 3, 2));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(embed_unit_disc(&ps, 3).unwrap().t, 12);
    }

    #[test]
    fn sqrt_ceiling() {
        assert_eq!(
            (1..=10).map(ceil_sqrt).collect::<Vec<_>>(),
            vec![1, 2, 2, 2, 3, 3, 3, 3, 3, 4]
        );
        assert_eq!(ceil_sqrt(0), 0);
    }

    #[test]
    fn knn_examples() {
        let ps = line(&[0.0, 1.0, 2.0, 3.0]);
        let g = knn_graph(&ps, 1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(knn_graph(&ps, 3).unwrap().num_edges(), 6);
        assert_eq!(knn_graph(&line(&[0.0]), 1).unwrap().n(), 1);
        assert!(knn_graph(&ps, 0).is_err());
    }

    #[test]
    fn csv_input() {
        let ps = PointSet::from_csv("0,0\n0.5, 1.25\n").unwrap();
        assert_eq!(ps.dim(), 2);
        assert_eq!(ps.points()[1], vec![0.5, 1.25]);
        assert!(matches!(PointSet::from_csv("0,x\n"), Err(Error::Parse(_))));
        assert!(matches!(PointSet::from_csv("0,1\n2\n"), Err(Error::Parse(_))));
        assert!(PointSet::new(1, vec![vec![f64::NAN]]).is_err());
    }

    fn points2() -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(0.0f64..4.0, 2), 0..40)
    }

    proptest! {
        #[test]
        fn udg_matches_all_pairs(pts in points2()) {
            let ps = PointSet::new(2, pts).unwrap();
            let g = unit_disc_graph(&ps);
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    prop_assert_eq!(g.has_edge(i, j), ps.dist2(i, j) <= 1.0);
                }
            }
        }

        #[test]
        fn udg_translation_invariant(pts in points2(), dx in -50i32..50, dy in -50i32..50) {
            let ps = PointSet::new(2, pts.clone()).unwrap();
            let moved = PointSet::new(2, pts.iter().map(|p| vec![p[0] + dx as f64, p[1] + dy as f64]).collect()).unwrap();
            prop_assert_eq!(unit_disc_graph(&ps).edges().collect::<Vec<_>>(), unit_disc_graph(&moved).edges().collect::<Vec<_>>());
        }

        #[test]
        fn embedding_is_valid(pts in points2()) {
            let ps = PointSet::new(2, pts).unwrap();
            let g = unit_disc_graph(&ps);
            let k = (1..).find(|&k| embed_unit_disc(&ps, k).is_ok()).unwrap();
            let emb = embed_unit_disc(&ps, k).unwrap();
            prop_assert_eq!(emb.t, 4 * k);
            if !ps.is_empty() {
                prop_assert_eq!(emb.max_subcube_occupancy, k);
            }
            prop_assert!(emb.max_cell_occupancy() <= emb.t);
            prop_assert_eq!(emb.verify(&g), Ok(()));
            // Every sub-cube's points are pairwise adjacent.
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    let same = (0..2).all(|a| {
                        let (x, y) = (ps.points()[i][a], ps.points()[j][a]);
                        x.floor() == y.floor() && ((x - x.floor()) * 2.0).floor() == ((y - y.floor()) * 2.0).floor()
                    });
                    if same {
                        prop_assert!(g.has_edge(i, j));
                    }
                }
            }
        }
    }
}
