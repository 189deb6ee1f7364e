//! Rotation systems: the combinatorial stand-in for a planar embedding.
//!
//! Every vertex stores its neighbours in counterclockwise order. Vertices on
//! the truncation boundary of a finite patch store a *linear* order: the
//! neighbours they have inside the patch, counterclockwise, with the missing
//! part of the neighbourhood sitting between the last and the first entry.
//! The corner spanning that gap is a "truncation corner" and any face walk
//! through it is treated as an infinite face.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Sentinel for unreachable vertices in distance arrays.
pub const UNREACHABLE: u32 = u32::MAX;

/// A directed edge `from → to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub from: Vertex,
    pub to: Vertex,
}

impl HalfEdge {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        HalfEdge { from, to }
    }

    pub fn twin(self) -> Self {
        HalfEdge { from: self.to, to: self.from }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Finite planar patch stored as a rotation system in compressed rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationGraph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    boundary: Vec<bool>,
    order: Vec<u32>,
}

impl RotationGraph {
    /// Builds and validates a rotation system.
    ///
    /// Fails if adjacency is asymmetric, a rotation repeats a neighbour or
    /// contains the vertex itself, or an id is out of range.
    pub fn new(rotation: Vec<Vec<Vertex>>, boundary: Vec<bool>) -> Result<Self> {
        if rotation.len() != boundary.len() {
            return Err(Error::structural(format!(
                "{} rotations but {} boundary flags",
                rotation.len(),
                boundary.len()
            )));
        }
        let mut offsets = Vec::with_capacity(rotation.len() + 1);
        let mut neighbors = Vec::with_capacity(rotation.iter().map(Vec::len).sum());
        offsets.push(0);
        for rot in &rotation {
            neighbors.extend_from_slice(rot);
            offsets.push(neighbors.len());
        }
        let g = Self::from_csr(offsets, neighbors, boundary);
        g.validate()?;
        Ok(g)
    }

    /// Builds from compressed rows without validation. Used by generators
    /// that construct valid rotations by design; call [`validate`](Self::validate)
    /// in tests.
    pub(crate) fn from_csr(offsets: Vec<usize>, neighbors: Vec<Vertex>, boundary: Vec<bool>) -> Self {
        let mut g = RotationGraph { offsets, neighbors, boundary, order: Vec::new() };
        g.order = g.compute_bfs_order();
        g
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        for v in 0..n as Vertex {
            let rot = self.rotation(v);
            for (i, &u) in rot.iter().enumerate() {
                if u as usize >= n {
                    return Err(Error::structural(format!("vertex {v} lists unknown neighbour {u}")));
                }
                if u == v {
                    return Err(Error::structural(format!("self-loop at vertex {v}")));
                }
                if rot[..i].contains(&u) {
                    return Err(Error::structural(format!("vertex {v} lists neighbour {u} twice")));
                }
                if self.slot_of(u, v).is_none() {
                    return Err(Error::structural(format!(
                        "asymmetric adjacency: {u} in rotation of {v} but not vice versa"
                    )));
                }
            }
        }
        Ok(())
    }

    fn compute_bfs_order(&self) -> Vec<u32> {
        let n = self.vertex_count();
        let mut rank = vec![UNREACHABLE; n];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if rank[s] != UNREACHABLE {
                continue;
            }
            rank[s] = next;
            next += 1;
            queue.push_back(s as Vertex);
            while let Some(v) = queue.pop_front() {
                for &u in self.rotation(v) {
                    if rank[u as usize] == UNREACHABLE {
                        rank[u as usize] = next;
                        next += 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        rank
    }

    pub fn vertex_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.vertex_count() as Vertex
    }

    pub fn half_edge_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbours of `v` in counterclockwise order.
    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn is_boundary(&self, v: Vertex) -> bool {
        self.boundary[v as usize]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    /// Rank of `v` in the breadth-first order from vertex 0.
    pub fn order(&self, v: Vertex) -> u32 {
        self.order[v as usize]
    }

    /// Position of `u` in the rotation of `v`.
    pub fn slot_of(&self, v: Vertex, u: Vertex) -> Option<usize> {
        self.rotation(v).iter().position(|&w| w == u)
    }

    pub fn are_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.rotation(a).contains(&b)
    }

    /// Neighbour of `v` at `slot + shift` (cyclically).
    pub fn neighbor_shifted(&self, v: Vertex, slot: usize, shift: i64) -> Vertex {
        let d = self.degree(v) as i64;
        let s = (slot as i64 + shift).rem_euclid(d) as usize;
        self.rotation(v)[s]
    }

    /// Index of the half-edge `v → rotation(v)[slot]`, usable as a dense key.
    pub fn half_edge_index(&self, v: Vertex, slot: usize) -> usize {
        self.offsets[v as usize] + slot
    }

    pub fn half_edge_id(&self, h: HalfEdge) -> Option<usize> {
        self.slot_of(h.from, h.to).map(|s| self.half_edge_index(h.from, s))
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        self.vertices()
            .flat_map(move |v| self.rotation(v).iter().map(move |&u| HalfEdge::new(v, u)))
    }

    /// Undirected edges with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.half_edges().filter(|h| h.from < h.to).map(|h| (h.from, h.to))
    }

    /// Successor of `h` along the face on its left: arriving at `h.to` from
    /// `h.from`, leave towards the neighbour just clockwise of `h.from`.
    pub fn face_successor(&self, h: HalfEdge) -> HalfEdge {
        let s = self
            .slot_of(h.to, h.from)
            .expect("half-edge endpoints must be adjacent");
        HalfEdge::new(h.to, self.neighbor_shifted(h.to, s, -1))
    }

    /// Whether the corner entered by `h` at `h.to` is the truncation gap of a
    /// boundary vertex.
    pub fn is_truncation_corner(&self, h: HalfEdge) -> bool {
        self.is_boundary(h.to) && self.slot_of(h.to, h.from) == Some(0)
    }

    /// Breadth-first distances from `source`.
    pub fn distances_from(&self, source: Vertex) -> Vec<u32> {
        self.distances_from_set(std::iter::once(source))
    }

    pub fn distances_from_set(&self, sources: impl IntoIterator<Item = Vertex>) -> Vec<u32> {
        bfs_distances(self.vertex_count(), sources, |v| self.rotation(v).iter().copied())
    }

    /// Breadth-first distances from the boundary-flagged vertices.
    pub fn distances_to_boundary(&self) -> Vec<u32> {
        let b: Vec<Vertex> = self.vertices().filter(|&v| self.is_boundary(v)).collect();
        self.distances_from_set(b)
    }

    /// One shortest path from `from` to `to`, or `None` when disconnected.
    /// Ties are broken towards lower rotation slots, so the result is
    /// deterministic.
    pub fn shortest_path(&self, from: Vertex, to: Vertex) -> Option<Vec<Vertex>> {
        let dist = self.distances_from(to);
        if dist[from as usize] == UNREACHABLE {
            return None;
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let d = dist[cur as usize];
            cur = *self
                .rotation(cur)
                .iter()
                .find(|&&u| dist[u as usize] + 1 == d)
                .expect("distance labels are consistent");
            path.push(cur);
        }
        Some(path)
    }

    /// Mirror image: every rotation reversed. Boundary gaps stay between the
    /// last and first entries.
    pub fn mirrored(&self) -> RotationGraph {
        let mut neighbors = self.neighbors.clone();
        for v in 0..self.vertex_count() {
            neighbors[self.offsets[v]..self.offsets[v + 1]].reverse();
        }
        RotationGraph::from_csr(self.offsets.clone(), neighbors, self.boundary.clone())
    }

    /// Rotations as owned vectors, in vertex order.
    pub fn rotations(&self) -> Vec<Vec<Vertex>> {
        self.vertices().map(|v| self.rotation(v).to_vec()).collect()
    }
}

/// Generic breadth-first search over an adjacency closure.
pub fn bfs_distances<I, F>(n: usize, sources: impl IntoIterator<Item = Vertex>, neighbors: F) -> Vec<u32>
where
    F: Fn(Vertex) -> I,
    I: Iterator<Item = Vertex>,
{
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s as usize] == UNREACHABLE {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize] + 1;
        for u in neighbors(v) {
            if dist[u as usize] == UNREACHABLE {
                dist[u as usize] = d;
                queue.push_back(u);
            }
        }
    }
    dist
}
