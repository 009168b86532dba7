//! Instance generators, witness gadgets for the product constructions, and
//! brute-force oracles used to cross-check the fast routines.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::geometry::PointSet;
use crate::graph::Graph;
use crate::product::{cartesian_product, strong_product};

/// `G(n, p)`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (rng.gen_range(0..i), i))).expect("tree edges are valid")
}

/// Random spanning subgraph of `g`: each edge kept with probability `p`.
pub fn random_edge_subgraph<R: Rng>(g: &Graph, p: f64, rng: &mut R) -> Graph {
    let kept: Vec<_> = g.edges().filter(|_| rng.gen_bool(p)).collect();
    let sub = Graph::from_edges(g.n(), kept).expect("subset of valid edges");
    match g.coords() {
        Some(c) => sub.with_coords(c.to_vec()).expect("same arity"),
        None => sub,
    }
}

/// The `w × h` grid with crosses (`P_w ⊠ P_h`), coordinates `(x, y)`.
pub fn crossed_grid(w: usize, h: usize) -> Graph {
    strong_product(&Graph::path(w), &Graph::path(h)).expect("small grid")
}

/// Appends a constant last coordinate, turning a subgraph of `ℤ^d` into a
/// subgraph of `ℤ^d ⊠ K_1`.
pub fn lift_to_k1(g: &Graph) -> Graph {
    let coords = g
        .coords()
        .expect("coordinates required")
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.push(0);
            c
        })
        .collect();
    g.clone().with_coords(coords).expect("uniform arity")
}

/// Random connected induced subgraph of `ℤ^d ⊠ H` on `n` vertices, grown
/// from the origin copy of vertex 0. Coordinates are `(z_1, …, z_d, h)`.
pub fn random_connected_product_subgraph<R: Rng>(d: usize, h: &Graph, n: usize, rng: &mut R) -> Graph {
    assert!(h.n() > 0 && n > 0);
    let mut chosen: Vec<Vec<i64>> = vec![{
        let mut c = vec![0; d];
        c.push(0);
        c
    }];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(chosen[0].clone(), 0)]);
    while chosen.len() < n {
        let base = chosen[rng.gen_range(0..chosen.len())].clone();
        let mut next: Vec<i64> = base[..d].iter().map(|&z| z + rng.gen_range(-1..=1)).collect();
        let hb = base[d] as usize;
        let hn = if rng.gen_bool(0.5) || h.degree(hb) == 0 {
            hb
        } else {
            *h.neighbors(hb).choose(rng).unwrap()
        };
        next.push(hn as i64);
        if !index.contains_key(&next) {
            index.insert(next.clone(), chosen.len());
            chosen.push(next);
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (ca, cb) = (&chosen[a], &chosen[b]);
            let grid_ok = (0..d).all(|i| (ca[i] - cb[i]).abs() <= 1);
            let (ha, hb) = (ca[d] as usize, cb[d] as usize);
            if grid_ok && (ha == hb || h.has_edge(ha, hb)) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
        .expect("distinct product vertices")
        .with_coords(chosen)
        .expect("uniform arity")
}

/// `n` uniform points in `[0, side)^d`.
pub fn random_points<R: Rng>(n: usize, d: usize, side: f64, rng: &mut R) -> PointSet {
    let points = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(0.0..side)).collect())
        .collect();
    PointSet::new(d, points).expect("finite points")
}

/// Outcome of verifying one of the explicit witness constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub construction: String,
    pub host_vertices: usize,
    pub host_edges: usize,
    pub pattern: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl WitnessReport {
    fn new(construction: &str, host: &Graph, pattern: String, check: Result<(), String>) -> Self {
        WitnessReport {
            construction: construction.to_string(),
            host_vertices: host.n(),
            host_edges: host.num_edges(),
            pattern,
            verdict: check.is_ok(),
            failure: check.err(),
        }
    }
}

/// In `K_{1,n} □ K_{1,n}` (centre `c`, leaves `a_i` / `b_j`), the branch
/// vertices `(a_i, c)` and `(c, b_j)` with subdivision vertices `(a_i, b_j)`
/// form a 1-subdivision of `K_{n,n}`.
pub fn star_cartesian_subdivision_witness(n: usize) -> WitnessReport {
    let star = Graph::star(n);
    let host = cartesian_product(&star, &star).expect("small product");
    let id = |v: usize, x: usize| v * (n + 1) + x;
    let left: Vec<usize> = (1..=n).map(|i| id(i, 0)).collect();
    let right: Vec<usize> = (1..=n).map(|j| id(0, j)).collect();
    let subdivision = |i: usize, j: usize| id(i + 1, j + 1);
    let check = verify_bipartite_subdivision(&host, &left, &right, subdivision);
    WitnessReport::new(
        "star-cartesian",
        &host,
        format!("1-subdivision of K_{{{n},{n}}}"),
        check,
    )
}

fn verify_bipartite_subdivision(
    host: &Graph,
    left: &[usize],
    right: &[usize],
    subdivision: impl Fn(usize, usize) -> usize,
) -> Result<(), String> {
    let mut used = BTreeSet::new();
    for &v in left.iter().chain(right) {
        if !used.insert(v) {
            return Err(format!("branch vertex {v} used twice"));
        }
    }
    for (i, &a) in left.iter().enumerate() {
        for (j, &b) in right.iter().enumerate() {
            let s = subdivision(i, j);
            if !used.insert(s) {
                return Err(format!("subdivision vertex {s} for ({i},{j}) is not private"));
            }
            if !host.has_edge(a, s) || !host.has_edge(s, b) {
                return Err(format!("path {a}-{s}-{b} missing from host"));
            }
        }
    }
    Ok(())
}

/// Vertex counts of the two colour classes of the complete binary tree of
/// the given depth (even levels, odd levels).
pub fn binary_tree_class_sizes(depth: u32) -> (usize, usize) {
    (0..=depth).fold((0, 0), |(even, odd), level| {
        if level % 2 == 0 {
            (even + (1 << level), odd)
        } else {
            (even, odd + (1 << level))
        }
    })
}

/// Deepest complete binary tree that fits in `K_{n,n}`: both colour classes
/// must fit on one side each.
pub fn max_binary_tree_depth(n: usize) -> u32 {
    let mut depth = 0;
    loop {
        let (even, odd) = binary_tree_class_sizes(depth + 1);
        if even.max(odd) > n {
            return depth;
        }
        depth += 1;
    }
}

/// Exhibits `K_{n,n} ⊆ K_{1,n} ⊠ K_{1,n}` on the vertices `(a_i, c)` and
/// `(c, b_j)`, then embeds the deepest complete binary tree that fits in
/// `K_{n,n}`, even levels on the `a` side and odd levels on the `b` side.
/// Both maps are verified against the host's adjacency.
pub fn strong_star_binary_tree_witness(n: usize) -> WitnessReport {
    let star = Graph::star(n);
    let host = strong_product(&star, &star).expect("small product");
    let id = |v: usize, x: usize| v * (n + 1) + x;
    let left: Vec<usize> = (1..=n).map(|i| id(i, 0)).collect();
    let right: Vec<usize> = (1..=n).map(|j| id(0, j)).collect();
    let depth = max_binary_tree_depth(n);
    let check = (|| {
        for &a in &left {
            for &b in &right {
                if !host.has_edge(a, b) {
                    return Err(format!("K_{{n,n}} edge {a}-{b} missing"));
                }
            }
        }
        // Heap numbering: node k has children 2k+1, 2k+2; level = ⌊log2(k+1)⌋.
        let nodes = (1usize << (depth + 1)) - 1;
        let (mut next_even, mut next_odd) = (0, 0);
        let mut image = Vec::with_capacity(nodes);
        for k in 0..nodes {
            let level = usize::BITS - (k + 1).leading_zeros() - 1;
            let v = if level % 2 == 0 {
                next_even += 1;
                left.get(next_even - 1)
            } else {
                next_odd += 1;
                right.get(next_odd - 1)
            };
            image.push(*v.ok_or_else(|| format!("tree of depth {depth} does not fit"))?);
        }
        let distinct: BTreeSet<_> = image.iter().collect();
        if distinct.len() != nodes {
            return Err("tree embedding is not injective".to_string());
        }
        for k in 1..nodes {
            let parent = (k - 1) / 2;
            if !host.has_edge(image[parent], image[k]) {
                return Err(format!("tree edge {parent}-{k} not preserved"));
            }
        }
        Ok(())
    })();
    WitnessReport::new(
        "star-strong",
        &host,
        format!("K_{{{n},{n}}} containing a complete binary tree of depth {depth}"),
        check,
    )
}

/// Why a proposed shallow-minor model was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MinorFailure {
    WrongBranchCount { expected: usize, found: usize },
    InvalidVertex(usize),
    EmptyBranchSet(usize),
    Overlap(usize),
    Disconnected(usize),
    RadiusExceeded { branch: usize, radius: usize },
    MissingLink(usize, usize),
}

/// Certifies that `model` (one branch set per vertex of `K_order`) is an
/// `r`-shallow `K_order` minor of `g`: branch sets disjoint, each inducing a
/// connected subgraph of radius at most `r`, and pairwise joined by an edge.
pub fn shallow_minor_check(g: &Graph, order: usize, r: usize, model: &[Vec<usize>]) -> Result<(), MinorFailure> {
    if model.len() != order {
        return Err(MinorFailure::WrongBranchCount {
            expected: order,
            found: model.len(),
        });
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (i, set) in model.iter().enumerate() {
        if set.is_empty() {
            return Err(MinorFailure::EmptyBranchSet(i));
        }
        for &v in set {
            if v >= g.n() {
                return Err(MinorFailure::InvalidVertex(v));
            }
            if owner[v] != usize::MAX {
                return Err(MinorFailure::Overlap(v));
            }
            owner[v] = i;
        }
    }
    for (i, set) in model.iter().enumerate() {
        match g.induced_subgraph(set).radius() {
            None => return Err(MinorFailure::Disconnected(i)),
            Some(radius) if radius > r => return Err(MinorFailure::RadiusExceeded { branch: i, radius }),
            Some(_) => {}
        }
    }
    let mut linked = vec![vec![false; order]; order];
    for (u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != usize::MAX && b != usize::MAX && a != b {
            linked[a][b] = true;
            linked[b][a] = true;
        }
    }
    for a in 0..order {
        for b in a + 1..order {
            if !linked[a][b] {
                return Err(MinorFailure::MissingLink(a, b));
            }
        }
    }
    Ok(())
}

/// A `K_n` minor model in `G1 □ G2` built from a set `A` of `n` vertices at
/// a common distance from `centre` in `G1` and `C(n,2)` vertices of `G2`.
#[derive(Clone, Debug)]
pub struct ProductCliqueMinor {
    pub host: Graph,
    pub branch_sets: Vec<Vec<usize>>,
    /// Depth the model is certified for: twice the larger factor radius.
    pub depth: usize,
}

/// Builds the clique-minor model used to show that a cartesian product of
/// two classes with large balls has large shallow clique minors.
///
/// For `v ∈ A` the branch set holds the fibre `{(v, x) : x ∈ V(G2)}`. Each
/// pair `{v, w}` gets its own `G2` vertex `σ(v, w)` and the copy of a
/// `v`–`w` path through the BFS tree of `centre` in the fibre `G1 × σ(v,w)`;
/// its interior is split between the branch sets of `v` and `w`.
pub fn product_clique_minor(g1: &Graph, centre: usize, g2: &Graph, n: usize) -> Option<ProductCliqueMinor> {
    let dist = g1.distances_from(centre);
    let depth_of = |v: usize| dist[v];
    let max_d = dist.iter().flatten().copied().max().unwrap_or(0);
    let (level, a): (usize, Vec<usize>) = (1..=max_d).find_map(|i| {
        let at: Vec<usize> = (0..g1.n()).filter(|&v| depth_of(v) == Some(i)).take(n).collect();
        (at.len() == n).then_some((i, at))
    })?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    if g2.n() < pairs.len().max(1) {
        return None;
    }
    let host = cartesian_product(g1, g2).ok()?;
    let n2 = g2.n();
    let id = |v: usize, x: usize| v * n2 + x;

    // BFS parents towards the centre (smallest-id parent).
    let parent: Vec<Option<usize>> = (0..g1.n())
        .map(|v| match dist[v] {
            Some(d) if d > 0 => g1.neighbors(v).iter().copied().find(|&u| dist[u] == Some(d - 1)),
            _ => None,
        })
        .collect();
    let to_root = |mut v: usize| {
        let mut p = vec![v];
        while let Some(u) = parent[v] {
            p.push(u);
            v = u;
        }
        p
    };
    let mut branch_sets: Vec<Vec<usize>> = a.iter().map(|&v| (0..n2).map(|x| id(v, x)).collect()).collect();
    for (sigma, &(i, j)) in pairs.iter().enumerate() {
        let (pv, pw) = (to_root(a[i]), to_root(a[j]));
        // Trim the shared tail above the lowest common ancestor.
        let mut k = 0;
        while k < pv.len().min(pw.len()) && pv[pv.len() - 1 - k] == pw[pw.len() - 1 - k] {
            k += 1;
        }
        let mut path: Vec<usize> = pv[..=pv.len() - k].to_vec();
        path.extend(pw[..pw.len() - k].iter().rev());
        let interior = &path[1..path.len() - 1];
        let half = interior.len().div_ceil(2);
        for (t, &u) in interior.iter().enumerate() {
            let owner = if t < half { i } else { j };
            branch_sets[owner].push(id(u, sigma));
        }
    }
    for set in &mut branch_sets {
        set.sort_unstable();
    }
    let r1 = level;
    let r2 = g2.radius()?;
    Some(ProductCliqueMinor {
        host,
        branch_sets,
        depth: 2 * r1.max(r2),
    })
}

/// Independent reference implementations. They favour obviousness over
/// speed and share no code paths with the routines they check.
pub mod oracle {
    use super::*;

    /// Treewidth as the minimum over all elimination orders of the largest
    /// elimination degree, by depth-first search with a width cut-off.
    pub fn brute_force_treewidth(g: &Graph) -> usize {
        let n = g.n();
        let adj: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect();
        let mut best = n.saturating_sub(1);
        let mut alive = vec![true; n];
        fn rec(adj: &mut Vec<Vec<bool>>, alive: &mut Vec<bool>, left: usize, width: usize, best: &mut usize) {
            if width >= *best {
                return;
            }
            if left == 0 {
                *best = width;
                return;
            }
            let n = alive.len();
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let nb: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
                let saved = adj.clone();
                for &x in &nb {
                    for &y in &nb {
                        if x != y {
                            adj[x][y] = true;
                        }
                    }
                }
                alive[v] = false;
                rec(adj, alive, left - 1, width.max(nb.len()), best);
                alive[v] = true;
                *adj = saved;
            }
        }
        let mut adj = adj;
        if n == 0 {
            return 0;
        }
        best += 1;
        rec(&mut adj, &mut alive, n, 0, &mut best);
        best
    }

    /// Pathwidth as the minimum vertex separation number over all orders.
    pub fn brute_force_pathwidth(g: &Graph) -> usize {
        let n = g.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mut best = usize::MAX;
        permute(&mut order, 0, &mut |ord| {
            let mut worst = 0;
            for i in 0..n {
                let later: BTreeSet<usize> = ord[i + 1..].iter().copied().collect();
                let active = ord[..=i]
                    .iter()
                    .filter(|&&v| g.neighbors(v).iter().any(|w| later.contains(w)))
                    .count();
                worst = worst.max(active);
            }
            best = best.min(worst);
        });
        if n == 0 {
            0
        } else {
            best
        }
    }

    /// Calls `f` on every permutation of `items[k..]` (prefix fixed).
    pub fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, f);
            items.swap(k, i);
        }
    }

    /// `(r, ⪯)`-reachable set by enumerating every simple path of length at
    /// most `r` from `v`.
    pub fn reachable_by_paths(g: &Graph, position: &[usize], v: usize, r: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([v]);
        let mut path = vec![v];
        fn dfs(g: &Graph, pos: &[usize], r: usize, path: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
            let v = path[0];
            let last = *path.last().unwrap();
            if path.len() > r {
                return;
            }
            for &u in g.neighbors(last) {
                if path.contains(&u) {
                    continue;
                }
                if pos[u] <= pos[v] {
                    out.insert(u);
                } else {
                    path.push(u);
                    dfs(g, pos, r, path, out);
                    path.pop();
                }
            }
        }
        dfs(g, position, r, &mut path, &mut out);
        out
    }

    /// Exact `r`-localising test without certificates: every component of
    /// `G - X` must lie within distance `< r` (in `G`) of some vertex.
    pub fn is_localising(g: &Graph, x: &[usize], r: usize) -> bool {
        let mut keep = vec![true; g.n()];
        for &v in x {
            keep[v] = false;
        }
        let all_dist: Vec<Vec<Option<usize>>> = (0..g.n()).map(|v| g.distances_from(v)).collect();
        g.components_where(&keep).iter().all(|comp| {
            (0..g.n()).any(|c| comp.iter().all(|&u| all_dist[c][u].is_some_and(|d| d < r)))
        })
    }

    /// Pairwise distances by Floyd–Warshall.
    pub fn all_pairs_distances(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        for (u, v) in g.edges() {
            d[u][v] = 1;
            d[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }
}
