//! Random `r`-localising sets.
//!
//! A set `X` is `r`-localising in `G` if every component of `G - X` lies
//! within distance `< r` of a single vertex of `G`. Sets are sampled from
//! the distribution `f = f_{r,p,q}` on `{0, …, r}`:
//!
//! ```text
//! f(r) = p,   f(s) = min(q·F(s+1), 1 - F(s+1)),   F(s) = f(s) + … + f(r)
//! ```
//!
//! All arithmetic on `f` is done with 60 significant decimal digits.

use std::str::FromStr;

use bigdecimal::{BigDecimal, One, Zero};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

const PRECISION: u64 = 60;
const SEARCH_CAP: usize = 1_000_000;
pub const DEFAULT_RESAMPLE_CAP: usize = 10_000;

fn tolerance() -> BigDecimal {
    BigDecimal::from_str("1e-30").unwrap()
}

fn round(x: BigDecimal) -> BigDecimal {
    x.with_prec(PRECISION)
}

/// The table `f_{r,p,q}(0..=r)`.
#[derive(Clone, Debug)]
pub struct LocalisingDistribution {
    r: usize,
    p: BigDecimal,
    q: BigDecimal,
    f: Vec<BigDecimal>,
    valid: bool,
}

impl LocalisingDistribution {
    /// Evaluates the recursion from `s = r` down to 0. An `f` that does not
    /// sum to 1 is returned with `is_valid() == false` rather than as an
    /// error.
    pub fn new(r: usize, p: BigDecimal, q: BigDecimal) -> Result<Self> {
        let zero = BigDecimal::zero();
        let one = BigDecimal::one();
        if r < 1 {
            return Err(Error::InvalidParameter("radius must be at least 1".into()));
        }
        if p <= zero || p >= one || q <= zero || q >= one {
            return Err(Error::InvalidParameter(format!("need 0 < p, q < 1, got p={p}, q={q}")));
        }
        let mut f = vec![zero; r + 1];
        f[r] = p.clone();
        let mut tail = p.clone();
        for s in (0..r).rev() {
            let a = round(&q * &tail);
            let b = &one - &tail;
            f[s] = if a <= b { a } else { b };
            tail = round(&tail + &f[s]);
        }
        let valid = (&tail - &one).abs() <= tolerance();
        Ok(LocalisingDistribution { r, p, q, f, valid })
    }

    pub fn from_f64(r: usize, p: f64, q: f64) -> Result<Self> {
        let conv = |x: f64| {
            BigDecimal::try_from(x).map_err(|_| Error::InvalidParameter(format!("{x} is not a finite number")))
        };
        Self::new(r, conv(p)?, conv(q)?)
    }

    /// The distribution with `p = r^{-c-1/2}` and `q = r^{-1/2}`.
    pub fn for_exponent(r: usize, c: u32) -> Result<Self> {
        let (p, q) = exponent_parameters(r, c)?;
        Self::new(r, p, q)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> &BigDecimal {
        &self.p
    }

    pub fn q(&self) -> &BigDecimal {
        &self.q
    }

    pub fn f(&self) -> &[BigDecimal] {
        &self.f
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn sum(&self) -> BigDecimal {
        round(self.f.iter().sum())
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(0.0)
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(0.0)
    }

    /// Upper bound `p·|N^r(v)| + q` on `P[v ∈ X]`, given the size of the
    /// sphere of radius `r` around `v`.
    pub fn marginal_bound(&self, sphere: usize) -> f64 {
        self.p_f64() * sphere as f64 + self.q_f64()
    }

    /// Cumulative thresholds scaled to `2^64`; `r_i = s` for the first `s`
    /// whose threshold exceeds a uniform 64-bit draw.
    fn thresholds(&self) -> Vec<u128> {
        let scale = BigDecimal::from(1u128 << 64);
        let mut cum = BigDecimal::zero();
        let mut out: Vec<u128> = self
            .f
            .iter()
            .map(|fs| {
                cum = round(&cum + fs);
                round(&cum * &scale).to_u128().unwrap_or(0).min(1 << 64)
            })
            .collect();
        *out.last_mut().unwrap() = 1 << 64;
        out
    }
}

fn exponent_parameters(r: usize, c: u32) -> Result<(BigDecimal, BigDecimal)> {
    if r < 2 {
        return Err(Error::InvalidParameter("q = r^(-1/2) < 1 needs r >= 2".into()));
    }
    let sqrt_r = BigDecimal::from(r as u64)
        .sqrt()
        .expect("positive")
        .with_prec(PRECISION);
    let q = round(BigDecimal::one() / sqrt_r);
    let p = round(q.powi(2 * c as i64 + 1));
    Ok((p, q))
}

/// `p(1+q)^r > 1` for `p = r^{-c-1/2}`, `q = r^{-1/2}`, in exact decimals.
pub fn radius_condition(r: usize, c: u32) -> bool {
    let Ok((p, q)) = exponent_parameters(r, c) else {
        return false;
    };
    let base = round(BigDecimal::one() + q);
    let mut acc = BigDecimal::one();
    let mut sq = base;
    let mut e = r;
    while e > 0 {
        if e & 1 == 1 {
            acc = round(&acc * &sq);
        }
        sq = round(&sq * &sq);
        e >>= 1;
    }
    round(acc * p) > BigDecimal::one()
}

/// Smallest `r₀` such that `p(1+q)^r > 1` holds for every `r ≥ r₀`, with
/// `p = r^{-c-1/2}` and `q = r^{-1/2}`.
///
/// The condition is not monotone in `r` (for `c = 1` it holds at `r = 2`
/// and then fails for a while), so a plain first-hit scan is wrong. Since
/// `(1+q)^r ≥ e^{qr/2}`, the condition follows from
/// `E(r) = √r/2 − (c+½)·ln r > 0`, and `E` is increasing once
/// `r ≥ 16(c+½)²`. The first such `r` with `E(r) > 0` certifies the tail;
/// below it the condition is checked exactly, scanning downwards until it
/// first fails.
pub fn min_valid_radius(c: u32) -> Result<usize> {
    if c < 1 {
        return Err(Error::InvalidParameter("exponent c must be at least 1".into()));
    }
    let h = c as f64 + 0.5;
    let start = (16.0 * h * h).ceil() as usize;
    let r_safe = (start..=SEARCH_CAP)
        .find(|&r| (r as f64).sqrt() / 2.0 - h * (r as f64).ln() > 1e-9)
        .ok_or(Error::RadiusSearchCap(SEARCH_CAP))?;
    let mut r0 = r_safe;
    while r0 > 2 && radius_condition(r0 - 1, c) {
        r0 -= 1;
    }
    debug_assert!(LocalisingDistribution::for_exponent(r0, c).is_ok_and(|d| d.is_valid()));
    Ok(r0)
}

/// One component of `G - X` together with a vertex within distance `< r`
/// of all of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCertificate {
    pub centre: usize,
    pub max_distance: usize,
    pub component: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalisingSet {
    pub r: usize,
    pub members: Vec<usize>,
    pub certificate: Vec<ComponentCertificate>,
}

impl LocalisingSet {
    /// Recomputes the components of `G - X` and checks every certificate by
    /// BFS.
    pub fn verify(&self, g: &Graph) -> Result<(), String> {
        let mut keep = vec![true; g.n()];
        for &v in &self.members {
            if v >= g.n() {
                return Err(format!("member {v} out of range"));
            }
            keep[v] = false;
        }
        let mut comps = g.components_where(&keep);
        comps.sort();
        let mut claimed: Vec<Vec<usize>> = self.certificate.iter().map(|c| c.component.clone()).collect();
        claimed.sort();
        if comps != claimed {
            return Err("certificate components differ from those of G - X".into());
        }
        for cert in &self.certificate {
            if cert.centre >= g.n() {
                return Err(format!("centre {} out of range", cert.centre));
            }
            let dist = g.distances_within(cert.centre, self.r.saturating_sub(1));
            if let Some(&u) = cert.component.iter().find(|&&u| dist[u].is_none()) {
                return Err(format!("vertex {u} is at distance >= {} from centre {}", self.r, cert.centre));
            }
        }
        Ok(())
    }
}

/// Draws `X` as in the proof: each vertex `v_i` (in id order) gets a radius
/// `r_i ~ f`; `x` is claimed by the first `i` with `d(x, v_i) ≤ r_i` and
/// lands in `X` when that distance equals `r_i`. The certificate centre of
/// a component is `v_{i(z)}` for its vertex `z` of least `i(z)`.
pub fn sample_localising(g: &Graph, dist: &LocalisingDistribution, seed: u64) -> Result<LocalisingSet> {
    if !dist.is_valid() {
        return Err(Error::InvalidDistribution { r: dist.r });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thresholds = dist.thresholds();
    let n = g.n();
    let radii: Vec<usize> = (0..n)
        .map(|_| {
            let u = rng.next_u64() as u128;
            thresholds.iter().position(|&t| u < t).unwrap()
        })
        .collect();
    let mut owner = vec![usize::MAX; n];
    let mut on_boundary = vec![false; n];
    let mut unclaimed = n;
    for (i, &ri) in radii.iter().enumerate() {
        if unclaimed == 0 {
            break;
        }
        for (x, d) in g.distances_within(i, ri).into_iter().enumerate() {
            if let Some(d) = d {
                if owner[x] == usize::MAX {
                    owner[x] = i;
                    on_boundary[x] = d == ri;
                    unclaimed -= 1;
                }
            }
        }
    }
    let members: Vec<usize> = (0..n).filter(|&x| on_boundary[x]).collect();
    let keep: Vec<bool> = on_boundary.iter().map(|b| !b).collect();
    let certificate = g
        .components_where(&keep)
        .into_iter()
        .map(|component| {
            let centre = component.iter().map(|&z| owner[z]).min().unwrap();
            let d = g.distances_within(centre, dist.r);
            let max_distance = component.iter().map(|&u| d[u].unwrap_or(usize::MAX)).max().unwrap();
            ComponentCertificate {
                centre,
                max_distance,
                component,
            }
        })
        .collect();
    Ok(LocalisingSet {
        r: dist.r,
        members,
        certificate,
    })
}

/// Polynomial with non-negative integer coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthPoly {
    pub coeffs: Vec<u64>,
}

impl GrowthPoly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        GrowthPoly { coeffs }
    }

    /// `(2r+1)^e`, the ball size in `ℤ^e` with diagonals.
    pub fn grid(e: u32) -> Self {
        let mut coeffs = vec![1u64];
        for _ in 0..e {
            let mut next = vec![0u64; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i] += a;
                next[i + 1] += 2 * a;
            }
            coeffs = next;
        }
        GrowthPoly::new(coeffs)
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len().saturating_sub(1) as u32
    }

    pub fn eval(&self, r: usize) -> BigUint {
        let r = BigUint::from(r);
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &a| acc * &r + BigUint::from(a))
    }
}

/// Result of [`weighted_fragment`], with the quantities behind each bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub r: usize,
    pub c: u32,
    pub members: Vec<usize>,
    pub weight: u64,
    pub total_weight: u64,
    pub largest_component: usize,
    pub growth_at_r: String,
    pub draws: usize,
    pub seed: u64,
}

impl Fragment {
    /// `w(X) ≤ 2r^{-1/2}·w(V)`, tested as `w(X)²·r ≤ 4·w(V)²`.
    pub fn weight_bound_holds(&self) -> bool {
        weight_bound(self.weight, self.total_weight, self.r)
    }

    pub fn component_bound_holds(&self) -> bool {
        self.growth_at_r
            .parse::<BigUint>()
            .is_ok_and(|g| BigUint::from(self.largest_component) <= g)
    }
}

fn weight_bound(wx: u64, wv: u64, r: usize) -> bool {
    let lhs = BigUint::from(wx).pow(2) * BigUint::from(r);
    let rhs = BigUint::from(wv).pow(2) * 4u32;
    lhs <= rhs
}

/// Finds `X` with `w(X) ≤ 2r^{-1/2}·w(V)` whose removal leaves components
/// of at most `g(r)` vertices, by sampling localising sets for
/// `c = deg g + 1` until the weight bound holds.
///
/// Requires every closed `r`-ball to have at most `g(r)` vertices,
/// `g(r) ≤ r^c`, and `f_{r,p,q}` to be a distribution for
/// `p = r^{-c-1/2}`, `q = r^{-1/2}`; then each vertex is in `X` with
/// probability at most `2r^{-1/2}`.
pub fn weighted_fragment(
    g: &Graph,
    w: &[u64],
    r: usize,
    growth: &GrowthPoly,
    seed: u64,
    max_draws: usize,
) -> Result<Fragment> {
    if w.len() != g.n() {
        return Err(Error::InvalidParameter(format!("{} weights for {} vertices", w.len(), g.n())));
    }
    let c = growth.degree() + 1;
    let g_r = growth.eval(r);
    if g_r > BigUint::from(r).pow(c) {
        return Err(Error::InvalidParameter(format!("g({r}) = {g_r} exceeds r^c for c = {c}")));
    }
    for v in 0..g.n() {
        let size = g.distances_within(v, r).iter().flatten().count();
        if BigUint::from(size) > g_r {
            return Err(Error::GrowthViolated {
                vertex: v,
                r,
                size,
                bound: g_r.to_u128().unwrap_or(u128::MAX),
            });
        }
    }
    let dist = LocalisingDistribution::for_exponent(r, c)?;
    if !dist.is_valid() {
        let r0 = min_valid_radius(c)?;
        return Err(Error::RadiusBelowThreshold { r, r0, c });
    }
    let total: u64 = w
        .iter()
        .try_fold(0u64, |a, &b| a.checked_add(b))
        .ok_or_else(|| Error::InvalidParameter("total weight overflows".into()))?;
    for draw in 0..max_draws {
        let s = seed.wrapping_add(draw as u64);
        let set = sample_localising(g, &dist, s)?;
        let weight: u64 = set.members.iter().map(|&v| w[v]).sum();
        if weight_bound(weight, total, r) {
            let largest = set.certificate.iter().map(|c| c.component.len()).max().unwrap_or(0);
            return Ok(Fragment {
                r,
                c,
                members: set.members,
                weight,
                total_weight: total,
                largest_component: largest,
                growth_at_r: g_r.to_string(),
                draws: draw + 1,
                seed: s,
            });
        }
    }
    Err(Error::StatisticalFailure(max_draws))
}
