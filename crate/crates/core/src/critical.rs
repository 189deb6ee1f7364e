//! The φ functional, local subcriticality certificates, the lower bound on
//! the percolation probability above the threshold, the Russo-type
//! differential inequality and exponential decay fits.

use std::collections::{HashSet, VecDeque};

use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::exact::{exact_connection_poly, BernsteinPoly, LocalGraph, MAX_ENUMERATION_SITES};
use crate::graph::Vertex;
use crate::matching::MatchingGraph;
use crate::percolation::{two_point_many, Estimate, SiteGraph, TwoPointEvent};
use crate::scalar::Scalar;
use crate::{rng, Exact};

/// How boundary-flagged vertices of a patch are treated when computing `S°`
/// and the frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMode {
    /// Flagged vertices have neighbours beyond the patch: never interior,
    /// always on the frontier.
    Truncated,
    /// The patch is the whole graph.
    Closed,
}

/// A finite set `S ∋ v` with its interior and frontier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiRegion {
    pub v: Vertex,
    /// `S`, sorted.
    pub set: Vec<Vertex>,
    /// `S°`: members all of whose neighbours lie in `S`.
    pub interior: Vec<Vertex>,
    /// Members `y` with `∂_V y ∩ Sᶜ ≠ ∅`.
    pub frontier: Vec<Vertex>,
    pub mode: BoundaryMode,
}

impl PhiRegion {
    pub fn new<G: SiteGraph>(g: &G, v: Vertex, set: &[Vertex], mode: BoundaryMode) -> Result<Self> {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        if let Some(&x) = set.iter().find(|&&x| x as usize >= g.vertex_count()) {
            return Err(Error::precondition(format!("vertex {x} is not in the graph")));
        }
        if set.binary_search(&v).is_err() {
            return Err(Error::precondition(format!("v = {v} is not in S")));
        }
        let members: HashSet<Vertex> = set.iter().copied().collect();
        let mut interior = Vec::new();
        let mut frontier = Vec::new();
        for &x in &set {
            let mut leaves = mode == BoundaryMode::Truncated && g.is_boundary(x);
            g.for_each_neighbor(x, |u| leaves |= !members.contains(&u));
            if leaves {
                frontier.push(x);
            } else {
                interior.push(x);
            }
        }
        Ok(PhiRegion { v, set, interior, frontier, mode })
    }

    /// `S = B(v, r)` in the adjacency of `g`.
    pub fn ball<G: SiteGraph>(g: &G, v: Vertex, radius: usize, mode: BoundaryMode) -> Result<Self> {
        if v as usize >= g.vertex_count() {
            return Err(Error::precondition(format!("vertex {v} is not in the graph")));
        }
        let set = ball(g, v, radius);
        PhiRegion::new(g, v, &set, mode)
    }

    pub fn v_is_interior(&self) -> bool {
        self.interior.binary_search(&self.v).is_ok()
    }
}

fn ball<G: SiteGraph>(g: &G, v: Vertex, radius: usize) -> Vec<Vertex> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[v as usize] = 0;
    let mut queue = VecDeque::from([v]);
    let mut out = vec![v];
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        if d == radius {
            continue;
        }
        g.for_each_neighbor(x, |u| {
            if dist[u as usize] == usize::MAX {
                dist[u as usize] = d + 1;
                queue.push_back(u);
                out.push(u);
            }
        });
    }
    out.sort_unstable();
    out
}

/// Per frontier vertex `y`, the interior vertices adjacent to `y`.
fn frontier_targets<G: SiteGraph>(g: &G, region: &PhiRegion) -> Vec<Vec<Vertex>> {
    region
        .frontier
        .iter()
        .map(|&y| {
            let mut t = Vec::new();
            g.for_each_neighbor(y, |u| {
                if region.interior.binary_search(&u).is_ok() {
                    t.push(u);
                }
            });
            t
        })
        .collect()
}

/// `φ_p^v(S)` as a polynomial in `p` over the states of `S°`.
pub fn phi_poly<G: SiteGraph>(g: &G, region: &PhiRegion) -> Result<BernsteinPoly> {
    if !region.v_is_interior() {
        return Ok(BernsteinPoly::one());
    }
    let local = LocalGraph::induced(g, &region.interior)?;
    let targets: Vec<u32> = frontier_targets(g, region).into_iter().map(|t| local.mask_of(t)).collect();
    let mut counts = vec![0u64; region.interior.len() + 1];
    local.for_each_reach(local.index[&region.v], |open, reach| {
        let hits = targets.iter().filter(|&&t| reach & t != 0).count() as u64;
        counts[open.count_ones() as usize] += hits;
    });
    Ok(BernsteinPoly::from_counts(counts))
}

pub fn phi_exact<G: SiteGraph, T: Scalar>(g: &G, p: &T, region: &PhiRegion) -> Result<T> {
    Ok(phi_poly(g, region)?.eval(p))
}

/// Monte Carlo estimate of `φ_p^v(S)`; sample `i` draws the states of `S°`
/// (in increasing vertex order) from stream `(seed, i)`.
pub fn phi_monte_carlo<G: SiteGraph>(
    g: &G,
    p: f64,
    region: &PhiRegion,
    n_samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::precondition(format!("p = {p} is outside [0, 1]")));
    }
    if n_samples == 0 {
        return Err(Error::precondition("n_samples must be positive"));
    }
    if !region.v_is_interior() {
        return Ok(Estimate { mean: 1.0, std_error: 0.0, successes: n_samples, samples: n_samples });
    }
    let m = region.interior.len();
    let local_of = |x: Vertex| region.interior.binary_search(&x).ok();
    let adj: Vec<Vec<usize>> = region
        .interior
        .iter()
        .map(|&x| {
            let mut a = Vec::new();
            g.for_each_neighbor(x, |u| a.extend(local_of(u)));
            a
        })
        .collect();
    let targets: Vec<Vec<usize>> = frontier_targets(g, region)
        .into_iter()
        .map(|t| t.into_iter().filter_map(local_of).collect())
        .collect();
    let source = local_of(region.v).expect("v is interior");
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let open: Vec<bool> = rng::uniforms(seed, i, m).into_iter().map(|u| u < p).collect();
            if !open[source] {
                return 0.0;
            }
            let mut seen = vec![false; m];
            seen[source] = true;
            let mut stack = vec![source];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if open[y] && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            targets.iter().filter(|t| t.iter().any(|&x| seen[x])).count() as f64
        })
        .collect();
    Ok(Estimate::from_values(&values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiMethod {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: f64,
    /// Zero for exact values.
    pub std_error: f64,
    pub method: PhiMethod,
}

pub fn phi<G: SiteGraph>(g: &G, p: f64, region: &PhiRegion, method: PhiMethod) -> Result<PhiValue> {
    match method {
        PhiMethod::Exact => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::precondition(format!("p = {p} is outside [0, 1]")));
            }
            Ok(PhiValue { value: phi_exact(g, &p, region)?, std_error: 0.0, method })
        }
        PhiMethod::MonteCarlo { samples, seed } => {
            let e = phi_monte_carlo(g, p, region, samples, seed)?;
            Ok(PhiValue { value: e.mean, std_error: e.std_error, method })
        }
    }
}

/// A ball around `v` on which `φ ≤ 1 − ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub radius: usize,
    pub region: PhiRegion,
    pub phi: PhiValue,
}

pub const DEFAULT_CERTIFICATE_EPSILON: f64 = 0.05;
/// Samples used when `S°` is too large to enumerate. The Monte Carlo value
/// must clear `1 − ε` by three standard errors.
pub const CERTIFICATE_MC_SAMPLES: u64 = 20_000;

/// The first `B(v, r)`, `r ≤ max_radius`, with `φ_p^v ≤ 1 − ε`. Regions whose
/// interior fits [`MAX_ENUMERATION_SITES`] are evaluated exactly.
pub fn subcritical_certificate<G: SiteGraph>(
    g: &G,
    p: f64,
    v: Vertex,
    max_radius: usize,
    epsilon: f64,
) -> Result<Option<Certificate>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::precondition(format!("p = {p} is outside [0, 1]")));
    }
    for radius in 0..=max_radius {
        let region = PhiRegion::ball(g, v, radius, BoundaryMode::Truncated)?;
        let (value, upper) = if region.interior.len() <= MAX_ENUMERATION_SITES {
            let value = phi(g, p, &region, PhiMethod::Exact)?;
            (value, value.value)
        } else {
            let value =
                phi(g, p, &region, PhiMethod::MonteCarlo { samples: CERTIFICATE_MC_SAMPLES, seed: u64::from(v) })?;
            (value, value.value + 3.0 * value.std_error)
        };
        if upper <= 1.0 - epsilon {
            return Ok(Some(Certificate { radius, region, phi: value }));
        }
    }
    Ok(None)
}

/// `1 − ((1 − p) / (1 − p̃))^(1 − ε)`.
pub fn theta_lower_bound<T: Float>(p: T, p_tilde: T, epsilon: T) -> Result<T> {
    let (zero, one) = (T::zero(), T::one());
    if !(p_tilde >= zero && p_tilde < one) {
        return Err(Error::precondition("p_tilde must lie in [0, 1)"));
    }
    if !(p > p_tilde && p <= one) {
        return Err(Error::precondition("p must lie in (p_tilde, 1]"));
    }
    if !(epsilon >= zero && epsilon < one) {
        return Err(Error::precondition("epsilon must lie in [0, 1)"));
    }
    Ok(one - ((one - p) / (one - p_tilde)).powf(one - epsilon))
}

pub const RUSSO_MAX_VERTICES: usize = 20;
pub const RUSSO_MAX_RADIUS: usize = 3;

/// One grid point of [`russo_inequality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RussoPoint {
    pub p: Exact,
    /// `P_p(v ↔ Λᶜ)`.
    pub prob: Exact,
    pub derivative: Exact,
    pub inf_phi: Exact,
    /// `inf φ · (1 − P) / (1 − p)`.
    pub rhs: Exact,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RussoReport {
    pub v: Vertex,
    pub lambda: Vec<Vertex>,
    pub points: Vec<RussoPoint>,
}

impl RussoReport {
    pub fn holds(&self) -> bool {
        self.points.iter().all(|pt| pt.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RussoPoint> {
        self.points.iter().filter(|pt| !pt.holds)
    }
}

/// `k / 100` for `k = 1..=99`.
pub fn russo_grid() -> Vec<Exact> {
    (1..100).map(|k| Exact::new(k.into(), 100.into())).collect()
}

/// Checks `f'(p) ≥ inf_S φ_p^v(S) · (1 − f(p)) / (1 − p)` with
/// `f(p) = P_p(v ↔ Λᶜ)`, in exact arithmetic, the infimum running over the
/// balls `B(v, r)`, `r ≤ 3`, of the graph taken as a whole.
pub fn russo_inequality_check<G: SiteGraph>(g: &G, v: Vertex, lambda: &[Vertex], grid: &[Exact]) -> Result<RussoReport> {
    let n = g.vertex_count();
    if n > RUSSO_MAX_VERTICES {
        return Err(Error::resource(format!("{n} vertices exceeds the limit of {RUSSO_MAX_VERTICES}")));
    }
    let mut lambda = lambda.to_vec();
    lambda.sort_unstable();
    lambda.dedup();
    if lambda.binary_search(&v).is_err() {
        return Err(Error::precondition(format!("v = {v} is not in Λ")));
    }
    let outside: Vec<Vertex> = (0..n as Vertex).filter(|x| lambda.binary_search(x).is_err()).collect();
    let f = exact_connection_poly(g, v, &outside)?;
    let phis = (0..=RUSSO_MAX_RADIUS)
        .map(|r| phi_poly(g, &PhiRegion::ball(g, v, r, BoundaryMode::Closed)?))
        .collect::<Result<Vec<_>>>()?;
    let one = Exact::from_integer(1.into());
    let points = grid
        .iter()
        .map(|p| {
            if *p <= Exact::from_integer(0.into()) || *p >= one {
                return Err(Error::precondition("grid points must lie in (0, 1)"));
            }
            let prob = f.eval(p);
            let derivative = f.derivative(p);
            let inf_phi = phis.iter().map(|ph| ph.eval(p)).min().expect("at least one radius");
            let rhs = inf_phi.clone() * (one.clone() - prob.clone()) / (one.clone() - p.clone());
            let holds = derivative >= rhs;
            Ok(RussoPoint { p: p.clone(), prob, derivative, inf_phi, rhs, holds })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RussoReport { v, lambda, points })
}

/// A pair of vertices at a given `G*` distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayPair {
    pub u: Vertex,
    pub v: Vertex,
    pub distance: u32,
}

/// Which connection event a decay fit measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayVariant {
    /// `P_p(u ↔ v)` in `G`.
    Points,
    /// `P_p(∂*u ↔* ∂*v)` in `G*`.
    StarBoundaries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub pair: DecayPair,
    pub estimate: Estimate,
    /// `log((s + ½) / (n + 1))`.
    pub log_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub p: f64,
    pub variant: DecayVariant,
    pub points: Vec<DecayPoint>,
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Weighted residual sum of squares over its degrees of freedom.
    pub reduced_chi2: f64,
    pub r_squared: f64,
}

impl DecayFit {
    /// The decay rate `c_p = −slope`.
    pub fn rate(&self) -> f64 {
        -self.slope
    }

    pub fn ci_excludes_zero(&self) -> bool {
        self.ci_high < 0.0 || self.ci_low > 0.0
    }
}

/// Pairs `(root, v_d)` for `d = 1, 2, …` where `v_d` is the smallest vertex at
/// `G*` distance `d` from the root and both ends are at `G*` distance at least
/// `d` from the boundary.
pub fn auto_pairs(mg: &MatchingGraph<'_>, root: Vertex) -> Vec<DecayPair> {
    let g = mg.base;
    let from_root = mg.distances_from_set([root]);
    let to_boundary = mg.distances_from_set(g.vertices().filter(|&x| g.is_boundary(x)));
    let mut out = Vec::new();
    for d in 1.. {
        if to_boundary[root as usize] < d {
            break;
        }
        let Some(v) = g.vertices().find(|&x| from_root[x as usize] == d && to_boundary[x as usize] >= d) else {
            break;
        };
        out.push(DecayPair { u: root, v, distance: d });
    }
    out
}

/// Weighted least-squares fit of `log P̂` against `G*` distance.
///
/// Zero counts are smoothed by adding ½ a success and ½ a failure. Weights
/// are inverse delta-method variances; the slope error is scaled by the
/// reduced χ² when the points scatter more than sampling noise explains, and
/// the 95% interval uses Student's t with `m − 2` degrees of freedom.
/// Estimates at different distances share samples; that correlation is
/// ignored.
pub fn decay_fit(
    mg: &MatchingGraph<'_>,
    p: f64,
    pairs: &[DecayPair],
    variant: DecayVariant,
    n_samples: u64,
    seed: u64,
) -> Result<DecayFit> {
    if pairs.len() < 3 {
        return Err(Error::precondition("a decay fit needs at least three distances"));
    }
    if pairs.windows(2).any(|w| w[1].distance <= w[0].distance) {
        return Err(Error::precondition("pair distances must be strictly increasing"));
    }
    let g = mg.base;
    let to_boundary = mg.distances_from_set(g.vertices().filter(|&x| g.is_boundary(x)));
    for pr in pairs {
        let actual = mg.distances_from_set([pr.u])[pr.v as usize];
        if actual != pr.distance {
            return Err(Error::precondition(format!(
                "pair ({}, {}) is at G* distance {actual}, not {}",
                pr.u, pr.v, pr.distance
            )));
        }
        if to_boundary[pr.u as usize] < pr.distance || to_boundary[pr.v as usize] < pr.distance {
            return Err(Error::precondition(format!("pair ({}, {}) is too close to the boundary", pr.u, pr.v)));
        }
    }
    let uv: Vec<(Vertex, Vertex)> = pairs.iter().map(|pr| (pr.u, pr.v)).collect();
    let estimates = match variant {
        DecayVariant::Points => two_point_many(g, p, &uv, TwoPointEvent::Points, &|_| Vec::new(), n_samples, seed)?,
        DecayVariant::StarBoundaries => {
            let nb = |x: Vertex| mg.neighbors(x).collect::<Vec<_>>();
            two_point_many(mg, p, &uv, TwoPointEvent::StarBoundaries, &nb, n_samples, seed)?
        }
    };
    if estimates.iter().all(|e| e.successes == 0) {
        return Err(Error::precondition("decay too fast to resolve; increase samples"));
    }
    let n = n_samples as f64;
    let points: Vec<DecayPoint> = pairs
        .iter()
        .zip(&estimates)
        .map(|(&pair, &estimate)| {
            let s = estimate.successes as f64 + 0.5;
            DecayPoint { pair, estimate, log_prob: (s / (n + 1.0)).ln() }
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|pt| f64::from(pt.pair.distance)).collect();
    let ys: Vec<f64> = points.iter().map(|pt| pt.log_prob).collect();
    let ws: Vec<f64> = points
        .iter()
        .map(|pt| {
            let s = pt.estimate.successes as f64 + 0.5;
            // var(log p̂) ≈ (1 − p̂) / (n p̂) = 1/s − 1/(n+1)
            1.0 / (1.0 / s - 1.0 / (n + 1.0)).max(f64::MIN_POSITIVE)
        })
        .collect();
    let fit = weighted_line(&xs, &ys, &ws);
    Ok(DecayFit {
        p,
        variant,
        points,
        slope: fit.slope,
        intercept: fit.intercept,
        slope_std_error: fit.slope_se,
        ci_low: fit.slope - fit.t * fit.slope_se,
        ci_high: fit.slope + fit.t * fit.slope_se,
        reduced_chi2: fit.reduced_chi2,
        r_squared: fit.r_squared,
    })
}

struct LineFit {
    slope: f64,
    intercept: f64,
    slope_se: f64,
    t: f64,
    reduced_chi2: f64,
    r_squared: f64,
}

fn weighted_line(xs: &[f64], ys: &[f64], ws: &[f64]) -> LineFit {
    let sw: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let ybar = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let sxx: f64 = xs.iter().zip(ws).map(|(x, w)| w * (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).zip(ws).map(|((x, y), w)| w * (x - xbar) * (y - ybar)).sum();
    let syy: f64 = ys.iter().zip(ws).map(|(y, w)| w * (y - ybar).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let dof = (xs.len() - 2) as f64;
    let ssr: f64 = xs.iter().zip(ys).zip(ws).map(|((x, y), w)| w * (y - intercept - slope * x).powi(2)).sum();
    let reduced_chi2 = ssr / dof;
    let slope_se = (reduced_chi2.max(1.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).expect("positive dof").inverse_cdf(0.975);
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    LineFit { slope, intercept, slope_se, t, reduced_chi2, r_squared }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matching_graph;
    use crate::tiling::{build_ball, fixtures, TilingSpec};
    use num_traits::One;

    fn path_region(n: usize) -> (crate::RotationGraph, PhiRegion) {
        let g = fixtures::path(2 * n + 1);
        let set: Vec<Vertex> = g.vertices().collect();
        let region = PhiRegion::new(&g, n as Vertex, &set, BoundaryMode::Truncated).unwrap();
        (g, region)
    }

    #[test]
    fn region_interior_and_frontier() {
        let (_, region) = path_region(3);
        assert_eq!(region.interior, vec![1, 2, 3, 4, 5]);
        assert_eq!(region.frontier, vec![0, 6]);
        let g = fixtures::path(7);
        let closed = PhiRegion::new(&g, 3, &[0, 1, 2, 3, 4, 5, 6], BoundaryMode::Closed).unwrap();
        assert!(closed.frontier.is_empty());
        assert!(PhiRegion::new(&g, 3, &[0, 1], BoundaryMode::Closed).is_err());
    }

    #[test]
    fn path_phi_is_two_p_to_the_n() {
        for n in 1..=10 {
            let (g, region) = path_region(n);
            for k in 1..10 {
                let p = Exact::new(k.into(), 10.into());
                let expect = Exact::from_integer(2.into()) * num_traits::pow(p.clone(), n);
                assert_eq!(phi_exact(&g, &p, &region).unwrap(), expect, "n = {n}");
            }
        }
    }

    #[test]
    fn phi_is_one_off_the_interior() {
        let g = fixtures::path(9);
        let region = PhiRegion::new(&g, 2, &[2, 3, 4], BoundaryMode::Truncated).unwrap();
        assert!(!region.v_is_interior());
        assert_eq!(phi_exact(&g, &Exact::new(1.into(), 3.into()), &region).unwrap(), Exact::one());
        assert_eq!(phi_monte_carlo(&g, 0.3, &region, 10, 0).unwrap().mean, 1.0);
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let g = build_ball(&TilingSpec::new(3, 7, 3)).unwrap();
        let region = PhiRegion::ball(&g, 0, 2, BoundaryMode::Truncated).unwrap();
        assert_eq!(region.interior.len(), 8);
        for p in [0.1, 0.3, 0.5] {
            let exact: f64 = phi_exact(&g, &p, &region).unwrap();
            let mc = phi_monte_carlo(&g, p, &region, 20_000, 7).unwrap();
            assert!((mc.mean - exact).abs() <= 3.0 * mc.std_error, "p={p}: {} vs {exact}", mc.mean);
        }
    }

    #[test]
    fn phi_monotone_in_p() {
        let g = build_ball(&TilingSpec::new(3, 7, 3)).unwrap();
        let region = PhiRegion::ball(&g, 0, 2, BoundaryMode::Truncated).unwrap();
        let poly = phi_poly(&g, &region).unwrap();
        let vals: Vec<Exact> = (0..=20).map(|k| poly.eval(&Exact::new(k.into(), 20.into()))).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn certificates() {
        let g = fixtures::path(41);
        let cert = subcritical_certificate(&g, 0.9, 20, 12, 0.1).unwrap().unwrap();
        assert_eq!(cert.radius, 8);
        assert!((cert.phi.value - 2.0 * 0.9f64.powi(8)).abs() < 1e-12);
        let zero = subcritical_certificate(&g, 0.0, 20, 3, DEFAULT_CERTIFICATE_EPSILON).unwrap().unwrap();
        assert_eq!(zero.radius, 1);
        assert_eq!(zero.phi.value, 0.0);
        assert!(subcritical_certificate(&g, 0.99, 20, 5, 0.1).unwrap().is_none());
        let h = build_ball(&TilingSpec::new(3, 7, 6)).unwrap();
        assert!(subcritical_certificate(&h, 0.15, 0, 4, DEFAULT_CERTIFICATE_EPSILON).unwrap().is_some());
    }

    #[test]
    fn theta_bound_values() {
        assert!((theta_lower_bound(0.7, 0.4, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(theta_lower_bound(1.0, 0.4, 0.2).unwrap(), 1.0);
        assert!(theta_lower_bound(0.4 + 1e-12, 0.4, 0.0).unwrap() < 1e-11);
        assert!(theta_lower_bound(0.3, 0.4, 0.0).is_err());
        let mut last = 0.0;
        for k in 41..=100 {
            let b = theta_lower_bound(k as f64 / 100.0, 0.4, 0.1).unwrap();
            assert!(b > last);
            assert!(b <= theta_lower_bound(k as f64 / 100.0, 0.4, 0.0).unwrap() + 1e-15);
            last = b;
        }
    }

    #[test]
    fn russo_examples() {
        let g = fixtures::path(5);
        let report = russo_inequality_check(&g, 2, &[1, 2, 3], &[Exact::new(1.into(), 2.into())]).unwrap();
        let pt = &report.points[0];
        // f = 2p^3 - p^5
        assert_eq!(pt.prob, Exact::new(7.into(), 32.into()));
        assert_eq!(pt.derivative, Exact::new(19.into(), 16.into()));
        assert!(report.holds());
        let near_one = russo_inequality_check(&g, 2, &[1, 2, 3], &[Exact::new(99.into(), 100.into())]).unwrap();
        assert!(near_one.holds());
        let star = fixtures::star(4);
        let all: Vec<Vertex> = star.vertices().collect();
        assert!(russo_inequality_check(&star, 0, &all, &russo_grid()).unwrap().holds());
        assert_eq!(russo_inequality_check(&fixtures::path(21), 0, &[0], &russo_grid()).unwrap_err().kind(), crate::ErrorKind::Resource);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 0.3 * x).collect();
        let fit = weighted_line(&xs, &ys, &[1.0; 4]);
        assert!((fit.slope + 0.3).abs() < 1e-12);
        assert!((fit.intercept - 0.5).abs() < 1e-12);
    }

    #[test]
    fn decay_at_p_one_is_flat() {
        let g = build_ball(&TilingSpec::new(3, 7, 6)).unwrap();
        let mg = matching_graph(&g);
        let pairs = auto_pairs(&mg, 0);
        assert_eq!(pairs.iter().map(|p| p.distance).collect::<Vec<_>>(), vec![1, 2, 3]);
        let fit = decay_fit(&mg, 1.0, &pairs, DecayVariant::Points, 50, 1).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!(decay_fit(&mg, 0.0, &pairs, DecayVariant::Points, 50, 1).is_err());
    }
}
