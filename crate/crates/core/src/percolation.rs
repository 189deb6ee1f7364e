//! Bernoulli site percolation on a patch: sampling, cluster labelling and
//! connection estimates.
//!
//! "Infinite" is approximated by "touches the truncation boundary" throughout.

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{RotationGraph, Vertex};
use crate::matching::MatchingGraph;
use crate::rng;

/// Which adjacency clusters are formed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Adjacency {
    Graph,
    Star,
}

/// A graph that percolation runs on.
pub trait SiteGraph: Sync {
    fn vertex_count(&self) -> usize;
    fn for_each_neighbor(&self, v: Vertex, f: impl FnMut(Vertex));
    fn is_boundary(&self, v: Vertex) -> bool;
    fn adjacency(&self) -> Adjacency;
}

impl SiteGraph for RotationGraph {
    fn vertex_count(&self) -> usize {
        RotationGraph::vertex_count(self)
    }
    fn for_each_neighbor(&self, v: Vertex, mut f: impl FnMut(Vertex)) {
        for &u in self.rotation(v) {
            f(u);
        }
    }
    fn is_boundary(&self, v: Vertex) -> bool {
        RotationGraph::is_boundary(self, v)
    }
    fn adjacency(&self) -> Adjacency {
        Adjacency::Graph
    }
}

impl SiteGraph for MatchingGraph<'_> {
    fn vertex_count(&self) -> usize {
        MatchingGraph::vertex_count(self)
    }
    fn for_each_neighbor(&self, v: Vertex, f: impl FnMut(Vertex)) {
        self.neighbors(v).for_each(f);
    }
    fn is_boundary(&self, v: Vertex) -> bool {
        self.base.is_boundary(v)
    }
    fn adjacency(&self) -> Adjacency {
        Adjacency::Star
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::precondition(format!("p = {p} is outside [0, 1]")))
    }
}

/// One sample `ω ∈ {0,1}^V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub states: Vec<u8>,
    pub p: f64,
    pub seed: u64,
    pub sample_index: u64,
}

impl Configuration {
    /// Vertex `i` is open iff `uniforms[i] < p`.
    pub fn from_uniforms(uniforms: &[f64], p: f64, seed: u64, sample_index: u64) -> Self {
        let states = uniforms.iter().map(|&u| u8::from(u < p)).collect();
        Configuration { states, p, seed, sample_index }
    }

    pub fn state(&self, v: Vertex) -> u8 {
        self.states[v as usize]
    }

    pub fn open_count(&self) -> usize {
        self.states.iter().filter(|&&s| s == 1).count()
    }
}

pub fn sample(n: usize, p: f64, seed: u64, sample_index: u64) -> Result<Configuration> {
    check_p(p)?;
    Ok(Configuration::from_uniforms(&rng::uniforms(seed, sample_index, n), p, seed, sample_index))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterInfo {
    pub state: u8,
    pub size: usize,
    pub touches_boundary: bool,
    /// Smallest vertex id in the cluster.
    pub representative: Vertex,
}

/// Clusters of one state; vertices of the other state carry [`ClusterLabeling::NONE`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterLabeling {
    pub labels: Vec<u32>,
    pub clusters: Vec<ClusterInfo>,
    pub adjacency: Adjacency,
}

impl ClusterLabeling {
    pub const NONE: u32 = u32::MAX;

    pub fn label(&self, v: Vertex) -> Option<usize> {
        let l = self.labels[v as usize];
        (l != Self::NONE).then_some(l as usize)
    }

    pub fn connected(&self, u: Vertex, v: Vertex) -> bool {
        matches!((self.label(u), self.label(v)), (Some(a), Some(b)) if a == b)
    }

    pub fn members(&self, cluster: usize) -> Vec<Vertex> {
        (0..self.labels.len() as Vertex).filter(|&v| self.labels[v as usize] == cluster as u32).collect()
    }

    pub fn largest_size(&self) -> usize {
        self.clusters.iter().map(|c| c.size).max().unwrap_or(0)
    }
}

/// Union-find labelling of the clusters of `state`. Cluster ids are assigned
/// in order of each cluster's smallest vertex.
pub fn label_clusters<G: SiteGraph>(g: &G, config: &Configuration, state: u8) -> ClusterLabeling {
    let n = g.vertex_count();
    let mut uf: UnionFind<u32> = UnionFind::new(n);
    for v in 0..n as Vertex {
        if config.states[v as usize] != state {
            continue;
        }
        g.for_each_neighbor(v, |u| {
            if u > v && config.states[u as usize] == state {
                uf.union(v, u);
            }
        });
    }
    let mut root_label = vec![ClusterLabeling::NONE; n];
    let mut labels = vec![ClusterLabeling::NONE; n];
    let mut clusters: Vec<ClusterInfo> = Vec::new();
    for v in 0..n as Vertex {
        if config.states[v as usize] != state {
            continue;
        }
        let r = uf.find_mut(v) as usize;
        if root_label[r] == ClusterLabeling::NONE {
            root_label[r] = clusters.len() as u32;
            clusters.push(ClusterInfo { state, size: 0, touches_boundary: false, representative: v });
        }
        let l = root_label[r];
        labels[v as usize] = l;
        let c = &mut clusters[l as usize];
        c.size += 1;
        c.touches_boundary |= g.is_boundary(v);
    }
    ClusterLabeling { labels, clusters, adjacency: g.adjacency() }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub successes: u64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, samples: u64) -> Self {
        let mean = successes as f64 / samples as f64;
        let std_error = (mean * (1.0 - mean) / samples as f64).sqrt();
        Estimate { mean, std_error, successes, samples }
    }

    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Estimate { mean, std_error: (var / n).sqrt(), successes: 0, samples: values.len() as u64 }
    }
}

/// Which connection event a two-point estimate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoPointEvent {
    /// `u` and `v` in the same open cluster.
    Points,
    /// Some open vertex of `∂*u` connected to some open vertex of `∂*v`.
    StarBoundaries,
}

fn event_holds(
    labeling: &ClusterLabeling,
    event: TwoPointEvent,
    u: Vertex,
    v: Vertex,
    nbhd: &dyn Fn(Vertex) -> Vec<Vertex>,
) -> bool {
    match event {
        TwoPointEvent::Points => labeling.connected(u, v),
        TwoPointEvent::StarBoundaries => {
            let mut a: Vec<usize> = nbhd(u).into_iter().filter_map(|x| labeling.label(x)).collect();
            a.sort_unstable();
            nbhd(v).into_iter().filter_map(|x| labeling.label(x)).any(|l| a.binary_search(&l).is_ok())
        }
    }
}

/// Estimates of `P_p(event(u_i, v_i))` for several pairs from shared samples.
pub fn two_point_many<G: SiteGraph>(
    g: &G,
    p: f64,
    pairs: &[(Vertex, Vertex)],
    event: TwoPointEvent,
    star_boundary: &(dyn Fn(Vertex) -> Vec<Vertex> + Sync),
    n_samples: u64,
    seed: u64,
) -> Result<Vec<Estimate>> {
    check_p(p)?;
    if n_samples == 0 {
        return Err(Error::precondition("n_samples must be positive"));
    }
    let n = g.vertex_count();
    let hits: Vec<Vec<bool>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let config = sample(n, p, seed, i).expect("p checked");
            let lab = label_clusters(g, &config, 1);
            pairs
                .iter()
                .map(|&(u, v)| event_holds(&lab, event, u, v, &|x| star_boundary(x)))
                .collect()
        })
        .collect();
    Ok((0..pairs.len())
        .map(|j| {
            let s = hits.iter().filter(|h| h[j]).count() as u64;
            Estimate::from_counts(s, n_samples)
        })
        .collect())
}

/// `P_p(u ↔ v)` under the adjacency of `g`.
pub fn two_point<G: SiteGraph>(g: &G, p: f64, u: Vertex, v: Vertex, n_samples: u64, seed: u64) -> Result<Estimate> {
    Ok(two_point_many(g, p, &[(u, v)], TwoPointEvent::Points, &|_| Vec::new(), n_samples, seed)?[0])
}

/// `P_p(∂*u ↔* ∂*v)` in the matching graph.
pub fn two_point_star_boundaries(
    mg: &MatchingGraph<'_>,
    p: f64,
    u: Vertex,
    v: Vertex,
    n_samples: u64,
    seed: u64,
) -> Result<Estimate> {
    let nb = |x: Vertex| mg.neighbors(x).collect::<Vec<_>>();
    Ok(two_point_many(mg, p, &[(u, v)], TwoPointEvent::StarBoundaries, &nb, n_samples, seed)?[0])
}

/// Clusters of `state` that meet both `B(root, core_radius)` and the boundary.
pub fn boundary_cluster_count(labeling: &ClusterLabeling, core: &[Vertex]) -> usize {
    let mut seen: Vec<usize> = core
        .iter()
        .filter_map(|&v| labeling.label(v))
        .filter(|&l| labeling.clusters[l].touches_boundary)
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Vertices within graph distance `radius` of vertex 0.
pub fn core_ball(g: &RotationGraph, radius: u32) -> Vec<Vertex> {
    let d = g.distances_from(0);
    g.vertices().filter(|&v| d[v as usize] <= radius).collect()
}

/// One row of a percolation report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingRow {
    pub p: f64,
    pub sample: u64,
    pub state: u8,
    pub clusters_touching: usize,
    pub largest_size: usize,
}

/// Crossing counts for both states over `n_samples` samples.
pub fn crossing_counts<G: SiteGraph>(
    g: &G,
    p: f64,
    core: &[Vertex],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<CrossingRow>> {
    check_p(p)?;
    let n = g.vertex_count();
    let rows: Vec<[CrossingRow; 2]> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let config = sample(n, p, seed, i).expect("p checked");
            [1u8, 0u8].map(|state| {
                let lab = label_clusters(g, &config, state);
                CrossingRow {
                    p,
                    sample: i,
                    state,
                    clusters_touching: boundary_cluster_count(&lab, core),
                    largest_size: lab.largest_size(),
                }
            })
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matching_graph;
    use crate::tiling::{build_ball, fixtures, TilingSpec};
    use std::collections::VecDeque;

    fn bfs_labels<G: SiteGraph>(g: &G, config: &Configuration, state: u8) -> Vec<u32> {
        let n = g.vertex_count();
        let mut lab = vec![ClusterLabeling::NONE; n];
        let mut next = 0;
        for s in 0..n {
            if config.states[s] != state || lab[s] != ClusterLabeling::NONE {
                continue;
            }
            lab[s] = next;
            let mut q = VecDeque::from([s as Vertex]);
            while let Some(v) = q.pop_front() {
                g.for_each_neighbor(v, |u| {
                    if config.states[u as usize] == state && lab[u as usize] == ClusterLabeling::NONE {
                        lab[u as usize] = next;
                        q.push_back(u);
                    }
                });
            }
            next += 1;
        }
        lab
    }

    #[test]
    fn extreme_probabilities() {
        let c = sample(100, 0.0, 1, 0).unwrap();
        assert_eq!(c.open_count(), 0);
        let c = sample(100, 1.0, 1, 0).unwrap();
        assert_eq!(c.open_count(), 100);
        assert!(sample(10, 1.5, 1, 0).is_err());
    }

    #[test]
    fn open_fraction_concentrates() {
        let n = 100_000;
        let c = sample(n, 0.5, 11, 3).unwrap();
        let frac = c.open_count() as f64 / n as f64;
        assert!((frac - 0.5).abs() < 4.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn all_open_is_one_cluster() {
        let g = build_ball(&TilingSpec::new(3, 7, 3)).unwrap();
        let c = sample(g.vertex_count(), 1.0, 0, 0).unwrap();
        let lab = label_clusters(&g, &c, 1);
        assert_eq!(lab.clusters.len(), 1);
        assert_eq!(lab.clusters[0].size, g.vertex_count());
        assert!(lab.clusters[0].touches_boundary);
    }

    #[test]
    fn square_diagonal_joins_in_star_mode() {
        let g = fixtures::square();
        let mg = matching_graph(&g);
        let c = Configuration { states: vec![0, 1, 0, 1], p: 0.5, seed: 0, sample_index: 0 };
        let star = label_clusters(&mg, &c, 0);
        assert!(star.connected(0, 2));
        assert_eq!(star.clusters.len(), 1);
        let plain = label_clusters(&g, &c, 0);
        assert!(!plain.connected(0, 2));
        assert_eq!(plain.clusters.len(), 2);
    }

    #[test]
    fn union_find_matches_bfs() {
        let g = build_ball(&TilingSpec::new(4, 5, 4)).unwrap();
        let mg = matching_graph(&g);
        for i in 0..100 {
            let c = sample(g.vertex_count(), 0.3 + 0.004 * i as f64, 5, i).unwrap();
            for state in [0, 1] {
                for (uf, bfs) in [
                    (label_clusters(&g, &c, state).labels, bfs_labels(&g, &c, state)),
                    (label_clusters(&mg, &c, state).labels, bfs_labels(&mg, &c, state)),
                ] {
                    // both number clusters by smallest member
                    assert_eq!(uf, bfs);
                }
            }
        }
    }

    #[test]
    fn monotone_coupling() {
        let g = build_ball(&TilingSpec::new(3, 7, 4)).unwrap();
        let u = rng::uniforms(4, 2, g.vertex_count());
        let lo = Configuration::from_uniforms(&u, 0.3, 4, 2);
        let hi = Configuration::from_uniforms(&u, 0.6, 4, 2);
        assert!(lo.states.iter().zip(&hi.states).all(|(a, b)| a <= b));
        assert_eq!(lo, sample(g.vertex_count(), 0.3, 4, 2).unwrap());
    }

    #[test]
    fn two_point_extremes() {
        let g = build_ball(&TilingSpec::new(3, 7, 3)).unwrap();
        assert_eq!(two_point(&g, 1.0, 0, 20, 10, 1).unwrap().mean, 1.0);
        assert_eq!(two_point(&g, 0.0, 0, 20, 10, 1).unwrap().mean, 0.0);
        assert!(two_point(&g, 0.5, 0, 20, 0, 1).is_err());
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let g = build_ball(&TilingSpec::new(3, 7, 4)).unwrap();
        let core = core_ball(&g, 1);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| crossing_counts(&g, 0.5, &core, 40, 9).unwrap());
        let b = crossing_counts(&g, 0.5, &core, 40, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn crossing_extremes() {
        let g = build_ball(&TilingSpec::new(3, 7, 4)).unwrap();
        let core = core_ball(&g, 2);
        let rows = crossing_counts(&g, 1.0, &core, 1, 0).unwrap();
        assert_eq!(rows.iter().find(|r| r.state == 1).unwrap().clusters_touching, 1);
        assert_eq!(rows.iter().find(|r| r.state == 0).unwrap().clusters_touching, 0);
    }
}
