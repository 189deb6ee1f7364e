//! Face tracing for rotation systems.

use serde::{Deserialize, Serialize};

use crate::graph::{HalfEdge, RotationGraph, Vertex};

/// One face of the embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    /// Closed walk, first vertex not repeated at the end. Finite faces are
    /// traversed counterclockwise (face on the left).
    pub boundary_walk: Vec<Vertex>,
    pub degree: usize,
    /// `false` when the walk passes a truncation corner.
    pub finite: bool,
}

impl FaceRecord {
    /// Whether the boundary walk visits each vertex once.
    pub fn is_simple_cycle(&self) -> bool {
        let mut seen = self.boundary_walk.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

/// All faces of a rotation system with the half-edge → face incidence.
#[derive(Debug, Clone)]
pub struct Faces {
    face_of: Vec<u32>,
    records: Vec<FaceRecord>,
}

impl Faces {
    pub fn records(&self) -> &[FaceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: usize) -> &FaceRecord {
        &self.records[id]
    }

    /// Face on the left of `h`.
    pub fn left_of(&self, g: &RotationGraph, h: HalfEdge) -> usize {
        let id = g.half_edge_id(h).expect("half-edge not in graph");
        self.face_of[id] as usize
    }

    /// Face on the left of the half-edge with dense index `idx`.
    pub fn left_of_index(&self, idx: usize) -> usize {
        self.face_of[idx] as usize
    }

    /// Faces around `v` in counterclockwise order, one per corner; the corner
    /// between slots `i` and `i + 1` is the face left of `v → rotation[i]`.
    /// Repeated faces appear with multiplicity.
    pub fn around(&self, g: &RotationGraph, v: Vertex) -> Vec<usize> {
        (0..g.degree(v))
            .map(|s| self.face_of[g.half_edge_index(v, s)] as usize)
            .collect()
    }

    /// Whether every face at `v` is finite.
    pub fn all_finite_at(&self, g: &RotationGraph, v: Vertex) -> bool {
        self.around(g, v).into_iter().all(|f| self.records[f].finite)
    }

    pub fn finite(&self) -> impl Iterator<Item = (usize, &FaceRecord)> {
        self.records.iter().enumerate().filter(|(_, f)| f.finite)
    }
}

/// Traces every face of `g`. Each half-edge lies on exactly one returned
/// walk; faces passing a truncation corner are marked infinite.
pub fn trace_faces(g: &RotationGraph) -> Faces {
    const UNSET: u32 = u32::MAX;
    let mut face_of = vec![UNSET; g.half_edge_count()];
    let mut records = Vec::new();
    for v in g.vertices() {
        for s in 0..g.degree(v) {
            let start_idx = g.half_edge_index(v, s);
            if face_of[start_idx] != UNSET {
                continue;
            }
            let id = records.len() as u32;
            let start = HalfEdge::new(v, g.rotation(v)[s]);
            let mut walk = Vec::new();
            let mut finite = true;
            let mut h = start;
            let mut idx = start_idx;
            loop {
                face_of[idx] = id;
                walk.push(h.from);
                if g.is_truncation_corner(h) {
                    finite = false;
                }
                h = g.face_successor(h);
                if h == start {
                    break;
                }
                idx = g.half_edge_id(h).expect("successor is a half-edge");
            }
            records.push(FaceRecord { degree: walk.len(), boundary_walk: walk, finite });
        }
    }
    Faces { face_of, records }
}

/// Degree of the face left of `h`, or `None` when that face crosses the
/// truncation boundary. Walks only the one face.
pub fn local_face_degree(g: &RotationGraph, h: HalfEdge) -> Option<usize> {
    let mut cur = h;
    let mut len = 0;
    loop {
        if g.is_truncation_corner(cur) {
            return None;
        }
        len += 1;
        cur = g.face_successor(cur);
        if cur == h {
            return Some(len);
        }
    }
}
