//! Combinatorial curvature and the Gauss–Bonnet checks on cycles.
//!
//! Angles are purely combinatorial: a face of degree `d` contributes
//! `(d−2)/d·π` at each of its corners. All quantities are [`PiMultiple`]s so
//! the checks can run in exact rational arithmetic.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::faces::{FaceRecord, Faces};
use crate::graph::{HalfEdge, RotationGraph, Vertex};
use crate::scalar::{PiMultiple, Scalar};

/// `κ(v) = 2π − Σ_{f∼v} (|f|−2)/|f|·π`, faces counted once per corner.
pub fn curvature<T: Scalar>(g: &RotationGraph, faces: &Faces, v: Vertex) -> Result<PiMultiple<T>> {
    if g.is_boundary(v) || !faces.all_finite_at(g, v) {
        return Err(Error::BoundaryVertex(v));
    }
    let angles: PiMultiple<T> = faces
        .around(g, v)
        .into_iter()
        .map(|f| PiMultiple::face_angle(faces.get(f).degree))
        .sum();
    Ok(PiMultiple::whole(2) - angles)
}

/// A simple cycle together with the part of the patch it encloses.
#[derive(Debug, Clone)]
pub struct CyclePatch {
    /// Counterclockwise: the enclosed region lies on the left.
    pub cycle: Vec<Vertex>,
    pub interior_vertices: Vec<Vertex>,
    /// Edges inside the region that are not cycle edges, as `(u, v)` with `u < v`.
    pub interior_edges: Vec<(Vertex, Vertex)>,
    pub enclosed_faces: Vec<FaceRecord>,
    face_ids: Vec<usize>,
}

fn check_simple_cycle(g: &RotationGraph, cycle: &[Vertex]) -> Result<()> {
    if cycle.len() < 3 {
        return Err(Error::precondition("a cycle needs at least 3 vertices"));
    }
    let distinct: HashSet<_> = cycle.iter().collect();
    if distinct.len() != cycle.len() {
        return Err(Error::precondition("cycle is not simple"));
    }
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if (a as usize) >= g.vertex_count() || !g.are_adjacent(a, b) {
            return Err(Error::precondition(format!("cycle step {a} -> {b} is not an edge")));
        }
    }
    Ok(())
}

/// Faces reachable from the face left of `start` without crossing a cycle
/// edge, or `None` once an infinite face is reached.
fn flood_left(
    g: &RotationGraph,
    faces: &Faces,
    cycle_edges: &HashSet<(Vertex, Vertex)>,
    start: HalfEdge,
) -> Option<Vec<usize>> {
    let first = faces.left_of(g, start);
    let mut seen = vec![false; faces.len()];
    seen[first] = true;
    let mut stack = vec![first];
    let mut out = Vec::new();
    while let Some(f) = stack.pop() {
        let rec = faces.get(f);
        if !rec.finite {
            return None;
        }
        out.push(f);
        let w = &rec.boundary_walk;
        for i in 0..w.len() {
            let (a, b) = (w[i], w[(i + 1) % w.len()]);
            if cycle_edges.contains(&(a.min(b), a.max(b))) {
                continue;
            }
            let other = faces.left_of(g, HalfEdge::new(b, a));
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    Some(out)
}

impl CyclePatch {
    /// Builds the patch enclosed by `cycle`, orienting the cycle so the
    /// enclosed region is on its left.
    pub fn from_cycle(g: &RotationGraph, faces: &Faces, cycle: &[Vertex]) -> Result<CyclePatch> {
        check_simple_cycle(g, cycle)?;
        let n = cycle.len();
        let cycle_edges: HashSet<(Vertex, Vertex)> = (0..n)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        let mut oriented = cycle.to_vec();
        let face_ids = match flood_left(g, faces, &cycle_edges, HalfEdge::new(cycle[0], cycle[1])) {
            Some(f) => f,
            None => {
                oriented.reverse();
                flood_left(g, faces, &cycle_edges, HalfEdge::new(oriented[0], oriented[1]))
                    .ok_or_else(|| Error::precondition("cycle does not enclose a finite region of the patch"))?
            }
        };
        let on_cycle: HashSet<Vertex> = cycle.iter().copied().collect();
        let mut interior = HashSet::new();
        let mut edges = HashSet::new();
        for &f in &face_ids {
            let w = &faces.get(f).boundary_walk;
            for i in 0..w.len() {
                let (a, b) = (w[i], w[(i + 1) % w.len()]);
                if !on_cycle.contains(&a) {
                    interior.insert(a);
                }
                let key = (a.min(b), a.max(b));
                if !cycle_edges.contains(&key) {
                    edges.insert(key);
                }
            }
        }
        let mut interior_vertices: Vec<Vertex> = interior.into_iter().collect();
        interior_vertices.sort_unstable();
        let mut interior_edges: Vec<(Vertex, Vertex)> = edges.into_iter().collect();
        interior_edges.sort_unstable();
        let mut face_ids = face_ids;
        face_ids.sort_unstable();
        Ok(CyclePatch {
            cycle: oriented,
            interior_vertices,
            interior_edges,
            enclosed_faces: face_ids.iter().map(|&f| faces.get(f).clone()).collect(),
            face_ids,
        })
    }

    pub fn face_ids(&self) -> &[usize] {
        &self.face_ids
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerCheck {
    pub s: usize,
    pub m: usize,
    pub t: usize,
    pub holds: bool,
}

/// Euler's formula on the closed disk bounded by the cycle: `s + m − t = 1`.
pub fn euler_patch_check(patch: &CyclePatch) -> EulerCheck {
    let s = patch.interior_vertices.len();
    let m = patch.enclosed_faces.len();
    let t = patch.interior_edges.len();
    EulerCheck { s, m, t, holds: s + m == t + 1 }
}

/// `Σ_{z∈C} Σ_{enclosed corners at z} (|f|−2)/|f|·π − (n−2)π`.
///
/// Nonpositive whenever every interior vertex has nonpositive curvature.
pub fn gauss_bonnet_deficit<T: Scalar>(
    g: &RotationGraph,
    faces: &Faces,
    patch: &CyclePatch,
) -> Result<PiMultiple<T>> {
    for &v in &patch.interior_vertices {
        let k: PiMultiple<T> = curvature(g, faces, v)?;
        if !k.is_nonpositive() {
            return Err(Error::DegreeCondition {
                vertex: v,
                reason: format!("positive curvature {:?}π inside the cycle", k.coefficient()),
            });
        }
    }
    let enclosed: HashSet<usize> = patch.face_ids.iter().copied().collect();
    let mut total = PiMultiple::<T>::zero();
    for &z in &patch.cycle {
        for f in faces.around(g, z) {
            if enclosed.contains(&f) {
                total = total + PiMultiple::face_angle(faces.get(f).degree);
            }
        }
    }
    Ok(total - PiMultiple::whole(patch.cycle.len() as i64 - 2))
}

/// Boundary of a union of finite faces if it is one simple cycle
/// (counterclockwise), else `None`.
pub fn region_boundary_cycle(g: &RotationGraph, faces: &Faces, region: &HashSet<usize>) -> Option<Vec<Vertex>> {
    let mut next_of = std::collections::HashMap::new();
    for &f in region {
        let w = &faces.get(f).boundary_walk;
        for i in 0..w.len() {
            let (a, b) = (w[i], w[(i + 1) % w.len()]);
            if !region.contains(&faces.left_of(g, HalfEdge::new(b, a))) && next_of.insert(a, b).is_some() {
                return None;
            }
        }
    }
    let &start = next_of.keys().min()?;
    let mut cycle = vec![start];
    let mut cur = next_of[&start];
    while cur != start {
        if cycle.len() > next_of.len() {
            return None;
        }
        cycle.push(cur);
        cur = *next_of.get(&cur)?;
    }
    (cycle.len() == next_of.len()).then_some(cycle)
}

/// Samples a simple cycle by growing a random disk of up to `max_faces`
/// finite faces, keeping the boundary a single simple cycle after each step.
pub fn sample_cycle<R: Rng + ?Sized>(
    g: &RotationGraph,
    faces: &Faces,
    max_faces: usize,
    rng: &mut R,
) -> Option<Vec<Vertex>> {
    let finite: Vec<usize> = faces.finite().map(|(i, _)| i).collect();
    let &seed = finite.choose(rng)?;
    let mut region: HashSet<usize> = [seed].into_iter().collect();
    let mut cycle = region_boundary_cycle(g, faces, &region)?;
    let target = rng.gen_range(1..=max_faces.max(1));
    let mut attempts = 0;
    while region.len() < target && attempts < 8 * target {
        attempts += 1;
        let i = rng.gen_range(0..cycle.len());
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let outside = faces.left_of(g, HalfEdge::new(b, a));
        if !faces.get(outside).finite {
            continue;
        }
        region.insert(outside);
        match region_boundary_cycle(g, faces, &region) {
            Some(c) => cycle = c,
            None => {
                region.remove(&outside);
            }
        }
    }
    Some(cycle)
}
