//! Balanced separators for subgraphs of products.
//!
//! [`layered_deletion`] handles subgraphs of `ℤ^d ⊠ H` with `H` of bounded
//! treewidth: deleting one residue class mod `m` per grid axis leaves pieces
//! inside `(m-1)`-wide windows, each decomposed from `H`'s decomposition.
//!
//! [`combined_separator`] handles subgraphs of `G1 ⊠ G2` where one factor
//! has small balls: a weighted fragmentation of that factor is pulled back
//! to `A`, and a separator `B` of what remains is taken from a tree
//! decomposition.

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::BoundCheck;
use crate::decomposition::{
    balance_limit, exact_treewidth_capped, heuristic_treewidth, separator_from_td, Separation, TreeDecomposition,
    DEFAULT_EXACT_CAP,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::localise::{min_valid_radius, weighted_fragment, Fragment, GrowthPoly, DEFAULT_RESAMPLE_CAP};

#[derive(Clone, Debug, Serialize)]
pub struct LayeredDeletionReport {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub m: usize,
    /// Chosen residue `α_i` for each grid axis.
    pub residues: Vec<usize>,
    /// `|V^{i,α_i}|` for each grid axis.
    pub class_sizes: Vec<usize>,
    pub deleted: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// Per component, the number of distinct values spanned on each axis.
    pub windows: Vec<Vec<usize>>,
    pub td: TreeDecomposition,
    pub width: usize,
    pub bounds: Vec<BoundCheck>,
}

impl LayeredDeletionReport {
    pub fn bounds_hold(&self) -> bool {
        crate::bounds::all_hold(&self.bounds)
    }

    pub fn windows_fit(&self) -> bool {
        self.windows.iter().flatten().all(|&w| w < self.m)
    }
}

/// Smallest `m ≥ 1` with `m^{d+1}(t+1) ≥ dn`, i.e. `⌈(dn/(t+1))^{1/(d+1)}⌉`.
pub fn layer_modulus(n: usize, d: usize, t: usize) -> usize {
    let target = d as u128 * n as u128;
    let mut m: usize = 1;
    while (m as u128)
        .checked_pow(d as u32 + 1)
        .and_then(|p| p.checked_mul(t as u128 + 1))
        .is_some_and(|v| v < target)
    {
        m += 1;
    }
    m
}

/// Tree decomposition of `g ⊆ ℤ^d ⊠ H` from a decomposition of `H`.
///
/// Coordinates are `(z_1, …, z_d, h)` with `h` a vertex of `H`. For each
/// axis the residue `α_i` of `z_i - min z_i` mod `m` with the fewest
/// vertices is chosen (smallest on ties) and its class deleted. Each
/// component `C` of what remains gets the bags `{v ∈ C : h(v) ∈ B}` for the
/// bags `B` of `h_td`; the deleted set `X` is added to every bag and forms a
/// hub bag joining the per-component trees.
pub fn layered_deletion(g: &Graph, h_td: &TreeDecomposition) -> Result<LayeredDeletionReport> {
    let n = g.n();
    let t = h_td.width();
    let coords = g.coords().ok_or(Error::MissingCoords)?;
    let arity = g.coord_arity().unwrap_or(0);
    if n > 0 && arity < 2 {
        return Err(Error::MalformedCoords(
            "need at least one grid axis followed by an H vertex".into(),
        ));
    }
    let d = arity.saturating_sub(1).max(1);
    let h_of = |v: usize| coords[v][d];
    let h_n = h_td.vertex_count();
    if let Some(v) = (0..n).find(|&v| h_of(v) < 0 || h_of(v) as usize >= h_n.max(1)) {
        return Err(Error::MalformedCoords(format!(
            "vertex {v} has H coordinate {} outside the decomposition",
            h_of(v)
        )));
    }
    let mut share_bag = vec![vec![false; h_n]; h_n];
    for bag in h_td.bags() {
        for &a in bag {
            for &b in bag {
                share_bag[a][b] = true;
            }
        }
    }
    for (u, v) in g.edges() {
        let (cu, cv) = (&coords[u], &coords[v]);
        let grid_ok = (0..d).all(|i| cu[i].abs_diff(cv[i]) <= 1);
        let (hu, hv) = (cu[d] as usize, cv[d] as usize);
        if !grid_ok || !(hu == hv || share_bag.get(hu).is_some_and(|row| row[hv])) {
            return Err(Error::MalformedCoords(format!(
                "edge {u}-{v} is not an edge of the grid product with H"
            )));
        }
    }

    let m = layer_modulus(n, d, t);
    let mut residues = Vec::with_capacity(d);
    let mut class_sizes = Vec::with_capacity(d);
    let mut deleted_mask = vec![false; n];
    for axis in 0..d {
        let min = (0..n).map(|v| coords[v][axis]).min().unwrap_or(0);
        let residue = |v: usize| ((coords[v][axis] as i128 - min as i128) % m as i128) as usize;
        let mut counts = vec![0usize; m];
        for v in 0..n {
            counts[residue(v)] += 1;
        }
        let (alpha, &size) = counts
            .iter()
            .enumerate()
            .min_by_key(|&(a, &c)| (c, a))
            .expect("m >= 1");
        for v in 0..n {
            if residue(v) == alpha {
                deleted_mask[v] = true;
            }
        }
        residues.push(alpha);
        class_sizes.push(size);
    }
    let deleted: Vec<usize> = (0..n).filter(|&v| deleted_mask[v]).collect();
    let keep: Vec<bool> = deleted_mask.iter().map(|x| !x).collect();
    let components = g.components_where(&keep);
    let windows: Vec<Vec<usize>> = components
        .iter()
        .map(|comp| {
            (0..d)
                .map(|axis| {
                    let lo = comp.iter().map(|&v| coords[v][axis]).min().unwrap();
                    let hi = comp.iter().map(|&v| coords[v][axis]).max().unwrap();
                    (hi - lo) as usize + 1
                })
                .collect()
        })
        .collect();

    let mut bags = vec![deleted.clone()];
    let mut tree_edges = Vec::new();
    for comp in &components {
        let base = bags.len();
        tree_edges.push((0, base));
        for bag in h_td.bags() {
            let mut out: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&v| bag.binary_search(&(h_of(v) as usize)).is_ok())
                .collect();
            out.extend_from_slice(&deleted);
            bags.push(out);
        }
        tree_edges.extend(h_td.tree_edges().iter().map(|&(a, b)| (base + a, base + b)));
    }
    let td = TreeDecomposition::new(bags, tree_edges);
    td.validate(g)
        .map_err(|e| Error::MalformedCoords(format!("assembled decomposition is invalid: {e}")))?;
    let width = td.width();

    let dn = BigUint::from(d) * BigUint::from(n);
    let mut bounds = Vec::new();
    if n > 0 {
        bounds.push(BoundCheck::at_most(
            "(width+1)^(d+1) <= 2^(d+1) (t+1) (dn)^d",
            BigUint::from(width + 1).pow(d as u32 + 1),
            BigUint::from(2u32).pow(d as u32 + 1) * BigUint::from(t + 1) * dn.pow(d as u32),
        ));
    }
    bounds.push(BoundCheck::at_most("|X| * m <= d n", deleted.len() * m, d * n));
    for (axis, &size) in class_sizes.iter().enumerate() {
        bounds.push(BoundCheck::at_most(&format!("|V^(axis {axis})| * m <= n"), size * m, n));
    }
    let widest = windows.iter().flatten().copied().max().unwrap_or(0);
    bounds.push(BoundCheck::below("widest component window < m", widest, m));

    Ok(LayeredDeletionReport {
        n,
        d,
        t,
        m,
        residues,
        class_sizes,
        deleted,
        components,
        windows,
        td,
        width,
        bounds,
    })
}

/// Exact decomposition up to the cap, min-fill above it.
pub fn default_td_provider(g: &Graph) -> Result<TreeDecomposition> {
    td_with_cap(g, DEFAULT_EXACT_CAP)
}

pub fn td_with_cap(g: &Graph, cap: usize) -> Result<TreeDecomposition> {
    if g.n() <= cap {
        exact_treewidth_capped(g, cap).map(|(_, td)| td)
    } else {
        Ok(heuristic_treewidth(g).1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CombinedReport {
    pub n: usize,
    pub beta: f64,
    /// `⌈n^β⌉`.
    pub r_required: usize,
    /// Radius actually used: at least the fragmentation threshold.
    pub r_used: usize,
    /// Which factor (1 or 2) was fragmented.
    pub factor: u8,
    pub fragment: Option<Fragment>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub remainder_width: Option<usize>,
    pub separation: Separation,
    pub bounds: Vec<BoundCheck>,
}

impl CombinedReport {
    pub fn bounds_hold(&self) -> bool {
        crate::bounds::all_hold(&self.bounds)
    }
}

/// Parameters for [`combined_separator`].
#[derive(Clone, Debug)]
pub struct CombinedParams {
    pub growth: GrowthPoly,
    pub beta: f64,
    pub seed: u64,
    pub max_draws: usize,
}

impl CombinedParams {
    pub fn new(growth: GrowthPoly, beta: f64, seed: u64) -> Self {
        CombinedParams {
            growth,
            beta,
            seed,
            max_draws: DEFAULT_RESAMPLE_CAP,
        }
    }
}

/// Balanced separation `A ∪ B` of `g ⊆ G1 ⊠ G2`.
///
/// Coordinates of `g` are `(v1, v2)`. With `r = max(⌈n^β⌉, r₀)`, where
/// `r₀` is the least radius at which the fragmentation distribution exists,
/// a factor whose closed `r`-balls have at most `g(r)` vertices is chosen
/// (`G1` first). Its vertices are weighted by fibre size and fragmented to
/// `X`; `A` is the preimage of `X`. `B` is a bag of a decomposition of
/// `g - A` from `td_provider`, chosen as in [`separator_from_td`].
pub fn combined_separator(
    g: &Graph,
    g1: &Graph,
    g2: &Graph,
    params: &CombinedParams,
    td_provider: &dyn Fn(&Graph) -> Result<TreeDecomposition>,
) -> Result<CombinedReport> {
    let n = g.n();
    if !(params.beta > 0.0 && params.beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {}", params.beta)));
    }
    let coords = g.coords().ok_or(Error::MissingCoords)?;
    if n > 0 && g.coord_arity() != Some(2) {
        return Err(Error::MalformedCoords("expected coordinates (v1, v2)".into()));
    }
    let factor_of = |v: usize, axis: usize| -> Result<usize> {
        let x = coords[v][axis];
        let bound = if axis == 0 { g1.n() } else { g2.n() };
        usize::try_from(x)
            .ok()
            .filter(|&x| x < bound)
            .ok_or_else(|| Error::MalformedCoords(format!("vertex {v} has factor {} coordinate {x}", axis + 1)))
    };
    let mut proj = vec![[0usize; 2]; n];
    for v in 0..n {
        proj[v] = [factor_of(v, 0)?, factor_of(v, 1)?];
    }
    for (u, v) in g.edges() {
        let ok = |f: &Graph, a: usize, b: usize| a == b || f.has_edge(a, b);
        if !ok(g1, proj[u][0], proj[v][0]) || !ok(g2, proj[u][1], proj[v][1]) {
            return Err(Error::MalformedCoords(format!("edge {u}-{v} is not an edge of G1 ⊠ G2")));
        }
    }

    let r_required = ((n.max(1) as f64).powf(params.beta).ceil() as usize).max(1);
    if n <= 1 {
        return Ok(CombinedReport {
            n,
            beta: params.beta,
            r_required,
            r_used: r_required,
            factor: 1,
            fragment: None,
            a: vec![],
            b: vec![],
            remainder_width: None,
            separation: Separation::from_parts(n, vec![], (0..n).collect(), vec![]),
            bounds: vec![],
        });
    }
    let c = params.growth.degree() + 1;
    let r_used = r_required.max(min_valid_radius(c)?);
    let g_r = params.growth.eval(r_used);
    let small_balls = |f: &Graph| {
        (0..f.n()).all(|v| BigUint::from(f.distances_within(v, r_used).iter().flatten().count()) <= g_r)
    };
    let (axis, factor) = if small_balls(g1) {
        (0, g1)
    } else if small_balls(g2) {
        (1, g2)
    } else {
        return Err(Error::NoSmallGrowthFactor { r: r_used });
    };
    let mut weights = vec![0u64; factor.n()];
    for p in &proj {
        weights[p[axis]] += 1;
    }
    let fragment = weighted_fragment(factor, &weights, r_used, &params.growth, params.seed, params.max_draws)?;
    let mut in_x = vec![false; factor.n()];
    for &x in &fragment.members {
        in_x[x] = true;
    }
    let a: Vec<usize> = (0..n).filter(|&v| in_x[proj[v][axis]]).collect();
    let rest: Vec<usize> = (0..n).filter(|&v| !in_x[proj[v][axis]]).collect();
    let sub = g.induced_subgraph(&rest).without_coords();
    let td = td_provider(&sub)?;
    let inner = separator_from_td(&sub, &td)?;
    let lift = |side: &[usize], sep: &[usize]| -> Vec<usize> {
        side.iter()
            .filter(|v| sep.binary_search(v).is_err())
            .map(|&v| rest[v])
            .collect()
    };
    let b: Vec<usize> = inner.separator.iter().map(|&v| rest[v]).collect();
    let strict1 = lift(&inner.side1, &inner.separator);
    let strict2 = lift(&inner.side2, &inner.separator);
    let mut separator = a.clone();
    separator.extend_from_slice(&b);
    let separation = Separation::from_parts(n, separator, strict1, strict2);

    let limit = balance_limit(n);
    let bounds = vec![
        BoundCheck::at_most("|strict side 1| <= ceil(2n/3)", separation.strict1(), limit),
        BoundCheck::at_most("|strict side 2| <= ceil(2n/3)", separation.strict2(), limit),
        BoundCheck::at_most(
            "w(X)^2 r <= 4 w(V)^2",
            BigUint::from(fragment.weight).pow(2) * BigUint::from(r_used),
            BigUint::from(fragment.total_weight).pow(2) * 4u32,
        ),
        BoundCheck::at_most(
            "largest fragment component <= g(r)",
            BigUint::from(fragment.largest_component),
            g_r,
        ),
        BoundCheck::at_most("|A| <= w(X)", a.len() as u64, fragment.weight),
    ];
    Ok(CombinedReport {
        n,
        beta: params.beta,
        r_required,
        r_used,
        factor: axis as u8 + 1,
        fragment: Some(fragment),
        a,
        b,
        remainder_width: Some(td.width()),
        separation,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::strong_product;
    use crate::testgen::{crossed_grid, lift_to_k1, random_connected_product_subgraph, random_tree};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path_in_z1(n: usize) -> Graph {
        let g = Graph::path(n);
        let coords = (0..n as i64).map(|i| vec![i, 0]).collect();
        g.with_coords(coords).unwrap()
    }

    #[test]
    fn modulus_formula() {
        assert_eq!(layer_modulus(16, 1, 0), 4);
        assert_eq!(layer_modulus(36, 2, 0), 5);
        assert_eq!(layer_modulus(1, 1, 0), 1);
        assert_eq!(layer_modulus(0, 1, 0), 1);
        assert_eq!(layer_modulus(17, 1, 0), 5);
    }

    #[test]
    fn path_sixteen() {
        let g = path_in_z1(16);
        let rep = layered_deletion(&g, &TreeDecomposition::trivial(1)).unwrap();
        assert_eq!(rep.m, 4);
        assert!(rep.deleted.len() <= 4);
        assert!(rep.components.iter().all(|c| c.len() <= 3));
        assert!(rep.bounds_hold() && rep.windows_fit());
        assert_eq!(rep.td.validate(&g), Ok(()));
    }

    #[test]
    fn single_vertex_and_empty() {
        let g = path_in_z1(1);
        let rep = layered_deletion(&g, &TreeDecomposition::trivial(1)).unwrap();
        assert_eq!(rep.m, 1);
        // With m = 1 the only residue class is everything, and no window
        // of width 0 can hold a vertex.
        assert_eq!(rep.deleted, vec![0]);
        assert!(rep.bounds_hold());
        let e = Graph::empty(0).with_coords(vec![]).unwrap();
        let rep = layered_deletion(&e, &TreeDecomposition::trivial(1)).unwrap();
        assert!(rep.deleted.is_empty() && rep.bounds_hold());
    }

    #[test]
    fn crossed_grid_six() {
        let g = lift_to_k1(&crossed_grid(6, 6));
        let rep = layered_deletion(&g, &TreeDecomposition::trivial(1)).unwrap();
        assert_eq!(rep.m, 5);
        assert!(rep.width <= 33);
        assert!(rep.bounds_hold() && rep.windows_fit());
    }

    #[test]
    fn rejects_bad_coordinates() {
        let g = Graph::path(3);
        assert!(matches!(
            layered_deletion(&g, &TreeDecomposition::trivial(1)),
            Err(Error::MissingCoords)
        ));
        let jump = Graph::path(2).with_coords(vec![vec![0, 0], vec![5, 0]]).unwrap();
        assert!(matches!(
            layered_deletion(&jump, &TreeDecomposition::trivial(1)),
            Err(Error::MalformedCoords(_))
        ));
        let h_out = Graph::path(2).with_coords(vec![vec![0, 0], vec![1, 3]]).unwrap();
        assert!(layered_deletion(&h_out, &TreeDecomposition::trivial(2)).is_err());
        let one_axis = Graph::path(2).with_coords(vec![vec![0], vec![1]]).unwrap();
        assert!(layered_deletion(&one_axis, &TreeDecomposition::trivial(1)).is_err());
    }

    #[test]
    fn combined_on_path_times_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g1 = Graph::path(8);
        let g2 = random_tree(8, &mut rng);
        let g = strong_product(&g1, &g2).unwrap();
        let g = g.clone().with_coords((0..64).map(|v| vec![v as i64 / 8, v as i64 % 8]).collect()).unwrap();
        let params = CombinedParams::new(GrowthPoly::new(vec![1, 2]), 0.3, 0);
        let rep = combined_separator(&g, &g1, &g2, &params, &default_td_provider).unwrap();
        assert_eq!(rep.separation.verify(&g), Ok(()));
        assert!(rep.bounds_hold());
        assert_eq!(rep.r_required, 4);
        assert!(rep.r_used >= rep.r_required);
        let mut ab = rep.a.clone();
        ab.extend(&rep.b);
        ab.sort_unstable();
        assert_eq!(ab, rep.separation.separator);
    }

    #[test]
    fn combined_degenerate_cases() {
        let params = CombinedParams::new(GrowthPoly::new(vec![1, 2]), 0.5, 0);
        let k1 = Graph::empty(1);
        let single = Graph::empty(1).with_coords(vec![vec![0, 0]]).unwrap();
        let rep = combined_separator(&single, &k1, &k1, &params, &default_td_provider).unwrap();
        assert!(rep.separation.separator.is_empty());

        // G2 = K1: the fibres are single vertices.
        let g1 = Graph::path(12);
        let g = g1.clone().with_coords((0..12).map(|v| vec![v, 0]).collect()).unwrap();
        let rep = combined_separator(&g, &g1, &k1, &params, &default_td_provider).unwrap();
        assert_eq!(rep.factor, 1);
        assert_eq!(rep.separation.verify(&g), Ok(()));
        assert_eq!(rep.a, rep.fragment.as_ref().unwrap().members);

        // Neither factor has small balls under g(r) = 1.
        let k2 = Graph::complete(2);
        let g = strong_product(&g1, &k2).unwrap();
        let g = g.with_coords((0..24).map(|v| vec![v as i64 / 2, v as i64 % 2]).collect()).unwrap();
        let flat = CombinedParams::new(GrowthPoly::new(vec![1]), 0.5, 0);
        assert!(matches!(
            combined_separator(&g, &g1, &k2, &flat, &default_td_provider),
            Err(Error::NoSmallGrowthFactor { .. })
        ));
    }

    #[test]
    fn combined_swaps_factors() {
        let star = Graph::star(30);
        let p = Graph::path(3);
        let g = strong_product(&star, &p).unwrap();
        let g = g.with_coords((0..93).map(|v| vec![v as i64 / 3, v as i64 % 3]).collect()).unwrap();
        // The star's 1-ball has 31 vertices, too many for g(r) = 10.
        let params = CombinedParams::new(GrowthPoly::new(vec![10]), 0.5, 0);
        let rep = combined_separator(&g, &star, &p, &params, &default_td_provider).unwrap();
        assert_eq!(rep.factor, 2);
        assert_eq!(rep.separation.verify(&g), Ok(()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn layered_bounds_on_random_subgraphs(seed in any::<u64>(), n in 1usize..60, d in 1usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = Graph::complete(2);
            let g = random_connected_product_subgraph(d, &h, n, &mut rng);
            let rep = layered_deletion(&g, &TreeDecomposition::trivial(2)).unwrap();
            prop_assert!(rep.bounds_hold(), "{:?}", rep.bounds);
            prop_assert!(rep.windows_fit());
            prop_assert_eq!(rep.td.validate(&g), Ok(()));
        }

        #[test]
        fn layered_with_path_factor(seed in any::<u64>(), n in 1usize..50) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = Graph::path(4);
            let h_td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]], vec![(0, 1), (1, 2)]);
            let g = random_connected_product_subgraph(1, &h, n, &mut rng);
            let rep = layered_deletion(&g, &h_td).unwrap();
            prop_assert!(rep.bounds_hold(), "{:?}", rep.bounds);
            prop_assert_eq!(rep.td.validate(&g), Ok(()));
        }
    }
}
