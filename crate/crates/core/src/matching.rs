//! The matching graph `G*`: `G` plus an edge between every non-adjacent pair
//! of vertices on a common finite face.

use serde::{Deserialize, Serialize};

use crate::faces::trace_faces;
use crate::graph::{HalfEdge, RotationGraph, Vertex};

#[derive(Debug, Clone)]
pub struct MatchingGraph<'g> {
    pub base: &'g RotationGraph,
    star_offsets: Vec<usize>,
    star: Vec<Vertex>,
    /// Vertices touching an infinite face, whose star neighbourhood may be
    /// missing pairs beyond the truncation.
    partial: Vec<bool>,
}

/// `∂*v` with a flag for neighbourhoods cut by the truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarNeighborhood {
    pub vertices: Vec<Vertex>,
    pub partial: bool,
}

impl<'g> MatchingGraph<'g> {
    pub fn new(g: &'g RotationGraph) -> Self {
        let faces = trace_faces(g);
        let n = g.vertex_count();
        let mut partial: Vec<bool> = g.boundary_flags().to_vec();
        let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
        for f in faces.records() {
            if !f.finite {
                for &v in &f.boundary_walk {
                    partial[v as usize] = true;
                }
                continue;
            }
            if f.degree < 4 {
                continue;
            }
            let w = &f.boundary_walk;
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    let (a, b) = (w[i], w[j]);
                    if a != b && !g.are_adjacent(a, b) {
                        pairs.push((a, b));
                        pairs.push((b, a));
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut star_offsets = vec![0usize; n + 1];
        for &(a, _) in &pairs {
            star_offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            star_offsets[i + 1] += star_offsets[i];
        }
        let star = pairs.into_iter().map(|(_, b)| b).collect();
        MatchingGraph { base: g, star_offsets, star, partial }
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    /// Extra neighbours of `v` in `G*` (not adjacent in `G`).
    pub fn star_only(&self, v: Vertex) -> &[Vertex] {
        &self.star[self.star_offsets[v as usize]..self.star_offsets[v as usize + 1]]
    }

    /// All `G*` neighbours: graph neighbours in rotation order, then star
    /// neighbours in increasing order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.base.rotation(v).iter().copied().chain(self.star_only(v).iter().copied())
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.base.degree(v) + self.star_only(v).len()
    }

    pub fn is_partial(&self, v: Vertex) -> bool {
        self.partial[v as usize]
    }

    pub fn are_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.base.are_adjacent(u, v) || self.star_only(u).binary_search(&v).is_ok()
    }

    /// Star edges `(u, v)` with `u < v`.
    pub fn star_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.base
            .vertices()
            .flat_map(move |u| self.star_only(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn star_edge_count(&self) -> usize {
        self.star.len() / 2
    }

    pub fn distances_from_set(&self, sources: impl IntoIterator<Item = Vertex>) -> Vec<u32> {
        crate::graph::bfs_distances(self.vertex_count(), sources, |v| self.neighbors(v))
    }
}

pub fn matching_graph(g: &RotationGraph) -> MatchingGraph<'_> {
    MatchingGraph::new(g)
}

pub fn star_neighborhood(mg: &MatchingGraph<'_>, v: Vertex) -> StarNeighborhood {
    let mut vertices: Vec<Vertex> = mg.neighbors(v).collect();
    vertices.sort_unstable();
    StarNeighborhood { vertices, partial: mg.is_partial(v) }
}

/// `G*` neighbours of `v` found by walking only the faces at `v`; faces that
/// cross the truncation are skipped. Agrees with [`MatchingGraph`] without a
/// global face trace.
pub fn local_star_neighbors(g: &RotationGraph, v: Vertex) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = g.rotation(v).to_vec();
    for &u in g.rotation(v) {
        let start = HalfEdge::new(v, u);
        let mut walk = Vec::new();
        let mut h = start;
        let finite = loop {
            if g.is_truncation_corner(h) {
                break false;
            }
            walk.push(h.to);
            h = g.face_successor(h);
            if h == start {
                break true;
            }
        };
        if finite {
            out.extend(walk.into_iter().filter(|&w| w != v));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
