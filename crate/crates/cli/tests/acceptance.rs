//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::HashMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bigdecimal::BigDecimal;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gps_core::colouring::{eval_colr, product_ordering, reachable_set, VertexOrdering};
use gps_core::decomposition::{exact_treewidth, heuristic_treewidth, TreeDecomposition};
use gps_core::geometry::{embed_unit_disc, unit_disc_graph, PointSet};
use gps_core::growth::{graph_power, sphere};
use gps_core::io::write_json;
use gps_core::localise::{
    min_valid_radius, radius_condition, sample_localising, weighted_fragment, GrowthPoly, LocalisingDistribution,
    DEFAULT_RESAMPLE_CAP,
};
use gps_core::product::{cartesian_product, strong_product};
use gps_core::separators::layered_deletion;
use gps_core::shortcuts::{apply_shortcuts, power_shortcut_system, validate_shortcuts};
use gps_core::testgen::{self, oracle, MinorFailure};
use gps_core::Graph;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn edges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

fn product_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let (na, nb) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let p = rng.gen_range(0.0..1.0);
        let a = testgen::random_graph(na, p, &mut rng);
        let b = testgen::random_graph(nb, p, &mut rng);
        let (ea, eb) = (a.num_edges(), b.num_edges());
        let strong = strong_product(&a, &b).map_err(|e| e.to_string())?;
        let cart = cartesian_product(&a, &b).map_err(|e| e.to_string())?;
        ensure(strong.n() == na * nb && cart.n() == na * nb, || format!("pair {i}: vertex count"))?;
        ensure(cart.num_edges() == na * eb + nb * ea, || format!("pair {i}: cartesian edge count"))?;
        ensure(strong.num_edges() == na * eb + nb * ea + 2 * ea * eb, || {
            format!("pair {i}: strong edge count")
        })?;
    }
    let p3 = Graph::path(3);
    let s = strong_product(&p3, &p3).unwrap().num_edges();
    let c = cartesian_product(&p3, &p3).unwrap().num_edges();
    ensure(s == 20 && c == 12, || format!("P3 products have {s} and {c} edges"))?;
    Ok("200 pairs; P3xP3 strong 20, cartesian 12".into())
}

fn exact_treewidth_oracle() -> Outcome {
    let mut cases: Vec<(String, Graph, usize)> = Vec::new();
    for n in 2..=10 {
        cases.push((format!("P{n}"), Graph::path(n), 1));
    }
    for n in 3..=10 {
        cases.push((format!("C{n}"), Graph::cycle(n), 2));
    }
    for n in 1..=8 {
        cases.push((format!("K{n}"), Graph::complete(n), n - 1));
    }
    cases.push(("3x3 grid".into(), cartesian_product(&Graph::path(3), &Graph::path(3)).unwrap(), 3));
    for (name, g, expected) in &cases {
        let (w, td) = exact_treewidth(g).map_err(|e| e.to_string())?;
        ensure(w == *expected, || format!("tw({name}) = {w}, expected {expected}"))?;
        ensure(td.validate(g).is_ok() && td.width() == w, || format!("{name}: witness invalid"))?;
        ensure(oracle::brute_force_treewidth(g) == w, || format!("{name}: brute force disagrees"))?;
        let (h, htd) = heuristic_treewidth(g);
        ensure(h >= w && htd.validate(g).is_ok(), || format!("{name}: heuristic {h} < exact {w}"))?;
    }
    Ok(format!("{} instances", cases.len()))
}

fn product_treewidth_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k2 = Graph::complete(2);
    let h_td = TreeDecomposition::trivial(2);
    let (t, d) = (1u32, 2u32);
    let mut widest = 0;
    for i in 0..20 {
        let n = rng.gen_range(20..=60);
        let g = testgen::random_connected_product_subgraph(2, &k2, n, &mut rng);
        let rep = layered_deletion(&g, &h_td).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(rep.td.validate(&g).is_ok(), || format!("instance {i}: decomposition invalid"))?;
        // width <= 2 (t+1)^{1/3} (2n)^{2/3} - 1, raised to the third power.
        let lhs = (rep.width as u128 + 1).pow(d + 1);
        let rhs = 2u128.pow(d + 1) * (t as u128 + 1) * (d as u128 * n as u128).pow(d);
        ensure(lhs <= rhs, || format!("instance {i}: width {} too large", rep.width))?;
        ensure(rep.deleted.len() * rep.m <= d as usize * n, || {
            format!("instance {i}: |X| = {} > dn/m", rep.deleted.len())
        })?;
        let coords = g.coords().unwrap();
        for comp in &rep.components {
            for axis in 0..2 {
                let lo = comp.iter().map(|&v| coords[v][axis]).min().unwrap();
                let hi = comp.iter().map(|&v| coords[v][axis]).max().unwrap();
                ensure((hi - lo) as usize + 1 < rep.m, || {
                    format!("instance {i}: component spans {} values on axis {axis}, m = {}", hi - lo + 1, rep.m)
                })?;
            }
        }
        widest = widest.max(rep.width);
    }
    Ok(format!("20 instances, widest decomposition {widest}"))
}

fn localising_sampler() -> Outcome {
    let g = testgen::crossed_grid(15, 15);
    let (r, p, q) = (3, 0.2, 0.9);
    let dist = LocalisingDistribution::from_f64(r, p, q).map_err(|e| e.to_string())?;
    ensure(dist.is_valid(), || "distribution invalid".into())?;
    let trials = 2000u64;
    let mut hits = vec![0u32; g.n()];
    for seed in 0..trials {
        let x = sample_localising(&g, &dist, seed).map_err(|e| e.to_string())?;
        x.verify(&g).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(oracle::is_localising(&g, &x.members, r), || format!("seed {seed}: oracle rejects"))?;
        for v in x.members {
            hits[v] += 1;
        }
    }
    let mut worst = f64::NEG_INFINITY;
    for v in 0..g.n() {
        let bound = p * sphere(&g, v, r).unwrap().len() as f64 + q;
        let mu = bound.min(1.0);
        let sigma = (mu * (1.0 - mu) / trials as f64).sqrt();
        let freq = hits[v] as f64 / trials as f64;
        ensure(freq <= bound + 4.0 * sigma, || format!("vertex {v}: frequency {freq} > {bound}"))?;
        worst = worst.max(freq - bound);
    }
    Ok(format!("2000 samples certified; max frequency - bound = {worst:.3}"))
}

fn validity_frontier() -> Outcome {
    let r0 = min_valid_radius(1).map_err(|e| e.to_string())?;
    ensure(radius_condition(r0, 1), || format!("condition fails at r0 = {r0}"))?;
    ensure(!radius_condition(r0 - 1, 1), || format!("condition holds at r0 - 1 = {}", r0 - 1))?;
    let dist = LocalisingDistribution::for_exponent(r0, 1).map_err(|e| e.to_string())?;
    let one = BigDecimal::from(1);
    let base = &one + dist.q();
    let mut power = one.clone();
    for _ in 0..r0 {
        power = (&power * &base).with_prec(80);
    }
    ensure(dist.p() * power > one, || format!("p(1+q)^r <= 1 at r0 = {r0}"))?;
    let tol: BigDecimal = "1e-30".parse().unwrap();
    let gap = (dist.sum() - BigDecimal::from(1)).abs();
    ensure(dist.is_valid() && gap <= tol, || format!("sum of f differs from 1 by {gap}"))?;
    Ok(format!("r0 = {r0}"))
}

fn weighted_fragmentation() -> Outcome {
    let g = testgen::crossed_grid(12, 12);
    let growth = GrowthPoly::grid(2);
    let r = min_valid_radius(growth.degree() + 1).map_err(|e| e.to_string())?;
    let w = vec![1u64; g.n()];
    let frag = weighted_fragment(&g, &w, r, &growth, 0, DEFAULT_RESAMPLE_CAP).map_err(|e| e.to_string())?;
    let wx: u128 = frag.members.iter().map(|&v| w[v] as u128).sum();
    let wv: u128 = w.iter().map(|&x| x as u128).sum();
    ensure(wx * wx * r as u128 <= 4 * wv * wv, || format!("w(X) = {wx} exceeds 2 r^(-1/2) w(V) at r = {r}"))?;
    let mut keep = vec![true; g.n()];
    for &v in &frag.members {
        keep[v] = false;
    }
    let g_r = (2 * r as u128 + 1).pow(2);
    let largest = g.components_where(&keep).iter().map(Vec::len).max().unwrap_or(0);
    ensure(largest as u128 <= g_r, || format!("component of {largest} > g(r) = {g_r}"))?;
    ensure(frag.draws <= DEFAULT_RESAMPLE_CAP, || "draw cap exceeded".into())?;
    Ok(format!("r = {r}, w(X) = {wx} of {wv}, {} draw(s)", frag.draws))
}

fn colouring_product() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut spot = 0;
    for i in 0..100 {
        let gn = rng.gen_range(1..=8);
        let hn = rng.gen_range(1..=4);
        let g = testgen::random_graph(gn, rng.gen_range(0.1..0.8), &mut rng);
        let h = testgen::random_graph(hn, rng.gen_range(0.0..1.0), &mut rng);
        ensure(h.max_degree() <= 3, || "H degree".into())?;
        let mut order: Vec<usize> = (0..gn).collect();
        order.shuffle(&mut rng);
        let ord = VertexOrdering::new(order).unwrap();
        let prod = strong_product(&g, &h).unwrap();
        let pord = product_ordering(&ord, &h);
        for r in 1..=3 {
            let lhs = eval_colr(&prod, &pord, r).unwrap();
            let rhs = eval_colr(&g, &ord, r).unwrap() * (h.max_degree() + 2).pow(r as u32);
            ensure(lhs < rhs, || format!("pair {i}, r = {r}: {lhs} >= {rhs}"))?;
        }
        if i % 10 == 0 {
            let pos: Vec<usize> = (0..prod.n()).map(|v| pord.position(v)).collect();
            for r in 1..=3 {
                for v in 0..prod.n() {
                    let fast = reachable_set(&prod, &pord, v, r).unwrap();
                    let slow: Vec<usize> = oracle::reachable_by_paths(&prod, &pos, v, r).into_iter().collect();
                    ensure(fast == slow, || format!("pair {i}, r = {r}, v = {v}: reachability mismatch"))?;
                }
            }
            spot += 1;
        }
    }
    Ok(format!("100 pairs x 3 radii; {spot} spot checks against path enumeration"))
}

fn shortcut_power() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let n = rng.gen_range(1..=10);
        let k = rng.gen_range(2..=4);
        let g = testgen::random_graph(n, rng.gen_range(0.1..0.6), &mut rng);
        let sys = power_shortcut_system(&g, k);
        validate_shortcuts(&g, &sys).map_err(|e| format!("graph {i}: {e}"))?;
        let gp = apply_shortcuts(&g, &sys).map_err(|e| e.to_string())?;
        ensure(edges(&gp) == edges(&graph_power(&g, k)), || format!("graph {i}: G^P differs from G^{k}"))?;
        let bound = 2 * k * g.max_degree().pow(k as u32);
        ensure(sys.usage(n).iter().all(|&u| u <= bound), || format!("graph {i}: usage above 2k Delta^k"))?;
    }
    Ok("100 graphs".into())
}

fn unit_disc_embedding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..50 {
        let n = rng.gen_range(1..=40);
        let ps = testgen::random_points(n, 2, 4.0, &mut rng);
        let k = (1..=n).find(|&k| embed_unit_disc(&ps, k).is_ok()).ok_or("no feasible k")?;
        let emb = embed_unit_disc(&ps, k).unwrap();
        ensure(emb.t == 4 * k, || format!("set {i}: t = {}", emb.t))?;
        let g = unit_disc_graph(&ps);
        let mut seen = HashMap::new();
        for (v, img) in emb.images.iter().enumerate() {
            ensure(img[2] >= 1 && img[2] as usize <= emb.t, || format!("set {i}: label out of range"))?;
            ensure(seen.insert(img.clone(), v).is_none(), || format!("set {i}: images collide"))?;
        }
        for (u, v) in g.edges() {
            let (a, b) = (&emb.images[u], &emb.images[v]);
            ensure((a[0] - b[0]).abs() <= 1 && (a[1] - b[1]).abs() <= 1, || {
                format!("set {i}: edge {u}-{v} not preserved")
            })?;
        }
        let mut occupancy: HashMap<(i64, i64), usize> = HashMap::new();
        for img in &emb.images {
            *occupancy.entry((img[0], img[1])).or_default() += 1;
        }
        ensure(occupancy.values().all(|&c| c <= emb.t), || format!("set {i}: cell over capacity"))?;
    }
    let line = PointSet::new(1, vec![vec![0.0], vec![0.5], vec![2.0]]).unwrap();
    let emb = embed_unit_disc(&line, 2).map_err(|e| e.to_string())?;
    ensure(emb.images == vec![vec![0, 1], vec![0, 2], vec![2, 1]], || format!("line example gave {:?}", emb.images))?;
    Ok("50 point sets; line example (0,1),(0,2),(2,1)".into())
}

fn witness_gadgets() -> Outcome {
    for n in 1..=6 {
        let a = testgen::star_cartesian_subdivision_witness(n);
        ensure(a.verdict, || format!("star-cartesian n = {n}: {:?}", a.failure))?;
        let b = testgen::strong_star_binary_tree_witness(n);
        ensure(b.verdict, || format!("star-strong n = {n}: {:?}", b.failure))?;
    }
    let star = Graph::star(4);
    let model = testgen::product_clique_minor(&star, 0, &star, 3).ok_or("construction failed")?;
    testgen::shallow_minor_check(&model.host, 3, model.depth, &model.branch_sets)
        .map_err(|e| format!("construction rejected: {e:?}"))?;
    // Remove the centre of the first fibre, (a_1, c).
    let centre = 4 + 1;
    let mut broken = model.branch_sets.clone();
    ensure(broken[0].contains(&centre), || "fibre centre missing".into())?;
    broken[0].retain(|&v| v != centre);
    let verdict = testgen::shallow_minor_check(&model.host, 3, model.depth, &broken);
    ensure(verdict == Err(MinorFailure::Disconnected(0)), || format!("mutated model gave {verdict:?}"))?;
    Ok(format!("n = 1..6; K3 model at depth {} accepted, mutant rejected", model.depth))
}

fn run_gps(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gps"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "gps {} exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: String| std::fs::write(dir.path().join(name), body).map_err(|e| e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = testgen::lift_to_k1(&testgen::crossed_grid(6, 6));
    write("grid.json", write_json(&grid))?;
    write("k1td.json", TreeDecomposition::trivial(1).to_json())?;
    write("p8.json", write_json(&Graph::path(8)))?;
    let tree = testgen::random_tree(8, &mut rng);
    write("t8.json", write_json(&tree))?;
    let prod = strong_product(&Graph::path(8), &tree).unwrap();
    write("g88.json", write_json(&prod))?;
    write("rand.json", write_json(&testgen::random_graph(9, 0.4, &mut rng)))?;
    write("k2.json", write_json(&Graph::complete(2)))?;
    write("order.json", "[8,7,6,5,4,3,2,1,0]".into())?;
    write("points.csv", "0,0\n0.5,0.2\n2.0,1.5\n2.4,1.1\n3.9,3.9\n".into())?;
    write("sys.json", power_shortcut_system(&Graph::cycle(6), 2).to_json())?;
    write("c6.json", write_json(&Graph::cycle(6)))?;

    let runs: Vec<Vec<&str>> = vec![
        vec!["product", "p8.json", "t8.json"],
        vec!["product", "p8.json", "t8.json", "--kind", "cartesian", "--emit", "text"],
        vec!["td", "exact", "rand.json"],
        vec!["td", "heuristic", "g88.json"],
        vec!["td", "separator", "g88.json"],
        vec!["separate", "layered", "grid.json", "--h-td", "k1td.json"],
        vec!["separate", "combined", "g88.json", "--g1", "p8.json", "--g2", "t8.json", "--beta", "0.3", "--growth-c", "1", "--seed", "5"],
        vec!["localise", "sample", "grid.json", "--r", "3", "--p", "0.2", "--q", "0.9", "--seed", "42"],
        vec!["localise", "fragment", "grid.json", "--r", "182", "--growth-c", "1", "--seed", "42"],
        vec!["localise", "r0", "--c", "1"],
        vec!["colr", "eval", "rand.json", "--order", "order.json", "--r", "2"],
        vec!["colr", "exact", "rand.json", "--r", "2"],
        vec!["colr", "product", "rand.json", "--order", "order.json", "--h", "k2.json", "--r", "2"],
        vec!["shortcut", "power", "rand.json", "--k", "3"],
        vec!["shortcut", "apply", "c6.json", "--system", "sys.json"],
        vec!["shortcut", "validate", "c6.json", "--system", "sys.json"],
        vec!["geo", "udg", "points.csv"],
        vec!["geo", "embed", "points.csv", "--k", "2"],
        vec!["geo", "knn", "points.csv", "--k", "2"],
        vec!["witness", "star-cartesian", "--n", "4"],
        vec!["witness", "star-strong", "--n", "5"],
    ];
    for args in &runs {
        let first = run_gps(args, dir.path())?;
        let second = run_gps(args, dir.path())?;
        ensure(first == second, || format!("gps {} is not deterministic", args.join(" ")))?;
        ensure(!first.is_empty(), || format!("gps {} printed nothing", args.join(" ")))?;
    }
    Ok(format!("{} commands byte-identical across repeats", runs.len()))
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("product algebra", 5, product_algebra),
        ("exact treewidth oracle", 30, exact_treewidth_oracle),
        ("layered deletion width bound", 60, product_treewidth_bound),
        ("r-localising sampler", 120, localising_sampler),
        ("f_{r,p,q} validity frontier", 10, validity_frontier),
        ("weighted fragmentation", 60, weighted_fragmentation),
        ("colouring product bound", 120, colouring_product),
        ("power/shortcut equivalence", 20, shortcut_power),
        ("unit-disc embedding", 10, unit_disc_embedding),
        ("witness gadgets", 10, witness_gadgets),
        ("CLI determinism", 10, cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed < Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {:.1}s, limit {limit}s", elapsed.as_secs_f64()))
            }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {tag}  {name} ({:.2}s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
