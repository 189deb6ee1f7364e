//! Outer boundaries of finite closed `*`-clusters.
//!
//! The contour of a closed `*`-cluster `ξ` is read off the union `R` of the
//! faces incident to `ξ`: every vertex on the boundary of `R` is `*`-adjacent
//! to `ξ`, and open by maximality of `ξ`. The boundary of the unbounded
//! component of the complement of `R`, traced with `R` on the left, is the
//! outer boundary.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::{trace_faces, Faces};
use crate::graph::{HalfEdge, RotationGraph, Vertex};
use crate::matching::MatchingGraph;
use crate::percolation::{label_clusters, Configuration};

/// Face data shared by all contour extractions on one patch.
#[derive(Debug, Clone)]
pub struct ContourContext<'m, 'g> {
    mg: &'m MatchingGraph<'g>,
    faces: Faces,
    /// Dual-graph distance from each face to the nearest infinite face.
    depth: Vec<u32>,
}

/// Result of checking a contour against its cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureCheck {
    /// Consecutive vertices (cyclically) are adjacent in `G`.
    pub closed: bool,
    pub all_open: bool,
    pub star_adjacent: bool,
    /// Every face at every vertex of `ξ` has winding number 1.
    pub encloses: bool,
}

impl EnclosureCheck {
    pub fn ok(&self) -> bool {
        self.closed && self.all_open && self.star_adjacent && self.encloses
    }
}

impl<'m, 'g> ContourContext<'m, 'g> {
    pub fn new(mg: &'m MatchingGraph<'g>) -> Self {
        let g = mg.base;
        let faces = trace_faces(g);
        let mut depth = vec![u32::MAX; faces.len()];
        let mut queue = VecDeque::new();
        for (id, f) in faces.records().iter().enumerate() {
            if !f.finite {
                depth[id] = 0;
                queue.push_back(id);
            }
        }
        while let Some(f) = queue.pop_front() {
            for nb in face_neighbors(g, &faces, f) {
                if depth[nb] == u32::MAX {
                    depth[nb] = depth[f] + 1;
                    queue.push_back(nb);
                }
            }
        }
        ContourContext { mg, faces, depth }
    }

    pub fn graph(&self) -> &'g RotationGraph {
        self.mg.base
    }

    pub fn faces(&self) -> &Faces {
        &self.faces
    }

    fn check_cluster(&self, config: &Configuration, xi: &[Vertex]) -> Result<HashSet<Vertex>> {
        let g = self.graph();
        if xi.is_empty() {
            return Err(Error::precondition("empty cluster"));
        }
        let set: HashSet<Vertex> = xi.iter().copied().collect();
        for &x in xi {
            if x as usize >= g.vertex_count() {
                return Err(Error::precondition(format!("vertex {x} is not in the graph")));
            }
            if g.is_boundary(x) {
                return Err(Error::precondition(format!(
                    "cluster touches the boundary at {x}; infinite faces are not supported"
                )));
            }
            if config.state(x) != 0 {
                return Err(Error::precondition(format!("vertex {x} is open")));
            }
            if let Some(y) = self.mg.neighbors(x).find(|&y| config.state(y) == 0 && !set.contains(&y)) {
                return Err(Error::precondition(format!("cluster is not maximal: {y} is a closed *-neighbour")));
            }
        }
        let mut seen = HashSet::from([xi[0]]);
        let mut stack = vec![xi[0]];
        while let Some(x) = stack.pop() {
            for y in self.mg.neighbors(x) {
                if set.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != set.len() {
            return Err(Error::precondition("cluster is not *-connected"));
        }
        Ok(set)
    }

    /// The outer boundary of the finite closed `*`-cluster `xi`, as a closed
    /// walk (first vertex not repeated) starting at its smallest vertex and
    /// running with `xi` on the left.
    pub fn outer_boundary(&self, config: &Configuration, xi: &[Vertex]) -> Result<Vec<Vertex>> {
        let g = self.graph();
        let set = self.check_cluster(config, xi)?;
        let region: HashSet<usize> = xi.iter().flat_map(|&x| self.faces.around(g, x)).collect();

        // half-edges with the region on the left and the complement on the right
        let mut rim: HashSet<HalfEdge> = HashSet::new();
        for &f in &region {
            let w = &self.faces.get(f).boundary_walk;
            for i in 0..w.len() {
                let h = HalfEdge::new(w[i], w[(i + 1) % w.len()]);
                if !region.contains(&self.faces.left_of(g, h.twin())) {
                    rim.insert(h);
                }
            }
        }
        let mut walks: Vec<Vec<HalfEdge>> = Vec::new();
        let mut order: Vec<HalfEdge> = rim.iter().copied().collect();
        order.sort_unstable_by_key(|h| (h.from, h.to));
        let mut used: HashSet<HalfEdge> = HashSet::new();
        for start in order {
            if used.contains(&start) {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = start;
            loop {
                used.insert(h);
                walk.push(h);
                h = self.next_rim_edge(&rim, h)?;
                if h == start {
                    break;
                }
                if used.contains(&h) {
                    return Err(Error::invariant("rim tracing entered a walk twice"));
                }
            }
            walks.push(walk);
        }
        let outer = self.outer_walk(&region, &walks)?;

        let vertices: Vec<Vertex> = walks[outer].iter().map(|h| h.from).collect();
        let start = (0..vertices.len())
            .min_by_key(|&i| (vertices[i], vertices[(i + 1) % vertices.len()]))
            .expect("walk is nonempty");
        let mut contour = vertices;
        contour.rotate_left(start);
        for &w in &contour {
            if config.state(w) != 1 {
                return Err(Error::invariant(format!("contour vertex {w} is closed")));
            }
            if !self.mg.neighbors(w).any(|u| set.contains(&u)) {
                return Err(Error::invariant(format!("contour vertex {w} is not *-adjacent to the cluster")));
            }
        }
        Ok(contour)
    }

    /// Continues a rim walk at `h.to` by sweeping counterclockwise from
    /// `h.from`, which keeps the same complement component on the right.
    fn next_rim_edge(&self, rim: &HashSet<HalfEdge>, h: HalfEdge) -> Result<HalfEdge> {
        let g = self.graph();
        let b = h.to;
        let rot = g.rotation(b);
        let s = g.slot_of(b, h.from).expect("half-edge in graph");
        for j in 1..=rot.len() {
            let c = rot[(s + j) % rot.len()];
            let next = HalfEdge::new(b, c);
            if rim.contains(&next) {
                return Ok(next);
            }
        }
        Err(Error::invariant(format!("rim walk stops at {b}")))
    }

    /// Index of the walk bordering the complement component that contains
    /// the infinite faces. Complement components are flooded in lockstep;
    /// bounded ones (holes) run dry, so the work stays near the cluster.
    fn outer_walk(&self, region: &HashSet<usize>, walks: &[Vec<HalfEdge>]) -> Result<usize> {
        if walks.len() == 1 {
            return Ok(0);
        }
        let g = self.graph();
        let mut owner: HashMap<usize, usize> = HashMap::new();
        let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); walks.len()];
        for (i, walk) in walks.iter().enumerate() {
            for h in walk {
                let f = self.faces.left_of(g, h.twin());
                if owner.insert(f, i).is_none() {
                    queues[i].push_back(f);
                }
            }
        }
        let mut open: Vec<usize> = (0..walks.len()).collect();
        loop {
            if open.len() == 1 {
                return Ok(open[0]);
            }
            if open.is_empty() {
                return Err(Error::invariant("no rim walk borders the unbounded component"));
            }
            let mut still = Vec::with_capacity(open.len());
            for &i in &open {
                let Some(f) = queues[i].pop_front() else { continue };
                if !self.faces.get(f).finite {
                    return Ok(i);
                }
                for nb in face_neighbors(g, &self.faces, f) {
                    if region.contains(&nb) {
                        continue;
                    }
                    match owner.get(&nb) {
                        None => {
                            owner.insert(nb, i);
                            queues[i].push_back(nb);
                        }
                        Some(&j) if j != i => {
                            return Err(Error::invariant("one complement component has two rim walks"));
                        }
                        _ => {}
                    }
                }
                still.push(i);
            }
            open = still;
        }
    }

    /// Winding number of the closed walk around face `f`, summed along a
    /// dual path from `f` down to an infinite face.
    pub fn winding(&self, walk: &[Vertex], f: usize) -> i64 {
        let g = self.graph();
        let mut count: HashMap<HalfEdge, i64> = HashMap::new();
        for i in 0..walk.len() {
            *count.entry(HalfEdge::new(walk[i], walk[(i + 1) % walk.len()])).or_default() += 1;
        }
        let c = |h: HalfEdge| count.get(&h).copied().unwrap_or(0);
        let mut total = 0;
        let mut cur = f;
        while self.depth[cur] > 0 && self.depth[cur] != u32::MAX {
            let w = &self.faces.get(cur).boundary_walk;
            let (h, next) = (0..w.len())
                .map(|i| HalfEdge::new(w[i], w[(i + 1) % w.len()]))
                .map(|h| (h, self.faces.left_of(g, h.twin())))
                .find(|&(_, nb)| self.depth[nb] + 1 == self.depth[cur])
                .expect("a face at positive depth has a shallower neighbour");
            total += c(h) - c(h.twin());
            cur = next;
        }
        total
    }

    /// Independent check of a contour: closure in `G`, states, `*`-adjacency
    /// to `xi`, and winding number 1 around every face at every vertex of `xi`.
    pub fn verify(&self, config: &Configuration, xi: &[Vertex], walk: &[Vertex]) -> EnclosureCheck {
        let g = self.graph();
        let set: HashSet<Vertex> = xi.iter().copied().collect();
        let closed =
            !walk.is_empty() && (0..walk.len()).all(|i| g.are_adjacent(walk[i], walk[(i + 1) % walk.len()]));
        let all_open = walk.iter().all(|&w| config.state(w) == 1);
        let star_adjacent = walk.iter().all(|&w| self.mg.neighbors(w).any(|u| set.contains(&u)));
        let encloses = closed
            && xi.iter().all(|&x| {
                !walk.contains(&x) && self.faces.around(g, x).into_iter().all(|f| self.winding(walk, f) == 1)
            });
        EnclosureCheck { closed, all_open, star_adjacent, encloses }
    }
}

fn face_neighbors<'a>(g: &'a RotationGraph, faces: &'a Faces, f: usize) -> impl Iterator<Item = usize> + 'a {
    let w = &faces.get(f).boundary_walk;
    (0..w.len()).map(move |i| faces.left_of(g, HalfEdge::new(w[(i + 1) % w.len()], w[i])))
}

/// Outer boundary of `xi` without a reusable context.
pub fn outer_boundary(mg: &MatchingGraph<'_>, config: &Configuration, xi: &[Vertex]) -> Result<Vec<Vertex>> {
    ContourContext::new(mg).outer_boundary(config, xi)
}

/// Closed `*`-clusters that avoid the boundary, each sorted, ordered by
/// smallest vertex.
pub fn finite_interior_clusters(mg: &MatchingGraph<'_>, config: &Configuration) -> Vec<Vec<Vertex>> {
    let lab = label_clusters(mg, config, 0);
    let mut out: Vec<Vec<Vertex>> = vec![Vec::new(); lab.clusters.len()];
    for v in 0..lab.labels.len() as Vertex {
        if let Some(l) = lab.label(v) {
            if !lab.clusters[l].touches_boundary {
                out[l].push(v);
            }
        }
    }
    out.retain(|c| !c.is_empty());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matching_graph;
    use crate::percolation::sample;
    use crate::tiling::{build_ball, fixtures, TilingSpec};

    fn config_with_closed(n: usize, closed: &[Vertex]) -> Configuration {
        let mut states = vec![1u8; n];
        for &c in closed {
            states[c as usize] = 0;
        }
        Configuration { states, p: 1.0, seed: 0, sample_index: 0 }
    }

    #[test]
    fn isolated_closed_vertex_gives_its_link() {
        let g = build_ball(&TilingSpec::new(3, 7, 3)).unwrap();
        let mg = matching_graph(&g);
        let ctx = ContourContext::new(&mg);
        let config = config_with_closed(g.vertex_count(), &[0]);
        let contour = ctx.outer_boundary(&config, &[0]).unwrap();
        let mut expect: Vec<Vertex> = g.rotation(0).to_vec();
        let k = expect.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
        expect.rotate_left(k);
        assert_eq!(contour, expect);
        assert!(ctx.verify(&config, &[0], &contour).ok());
        // the same cycle run backwards winds -1
        let mut rev = contour.clone();
        rev.reverse();
        assert!(!ctx.verify(&config, &[0], &rev).encloses);
    }

    #[test]
    fn diagonal_pair_in_square() {
        let g = fixtures::hexagon_with_diagonal_pair();
        let mg = matching_graph(&g);
        let ctx = ContourContext::new(&mg);
        let config = config_with_closed(8, &[0, 2]);
        let contour = ctx.outer_boundary(&config, &[0, 2]).unwrap();
        assert_eq!(contour, vec![1, 4, 5, 3, 7, 6]);
        assert!(ctx.verify(&config, &[0, 2], &contour).ok());
    }

    #[test]
    fn rejects_bad_clusters() {
        let g = build_ball(&TilingSpec::new(3, 7, 3)).unwrap();
        let mg = matching_graph(&g);
        let ctx = ContourContext::new(&mg);
        let config = config_with_closed(g.vertex_count(), &[0, 1]);
        assert!(ctx.outer_boundary(&config, &[0]).is_err());
        let boundary = g.vertices().find(|&v| g.is_boundary(v)).unwrap();
        let config = config_with_closed(g.vertex_count(), &[boundary]);
        assert!(ctx.outer_boundary(&config, &[boundary]).is_err());
    }

    #[test]
    fn ring_cluster_skips_its_hole() {
        // the sphere of radius 2 closed, everything else open: the open disk
        // inside is a hole of the face union, the contour is the sphere of
        // radius 3
        let g = build_ball(&TilingSpec::new(3, 7, 5)).unwrap();
        let mg = matching_graph(&g);
        let ctx = ContourContext::new(&mg);
        let d = g.distances_from(0);
        let ring: Vec<Vertex> = g.vertices().filter(|&v| d[v as usize] == 2).collect();
        let config = config_with_closed(g.vertex_count(), &ring);
        let contour = ctx.outer_boundary(&config, &ring).unwrap();
        assert!(contour.iter().all(|&w| d[w as usize] == 3));
        assert_eq!(contour.len(), 56);
        assert!(ctx.verify(&config, &ring, &contour).ok());
        let inner: Vec<Vertex> = g.rotation(0).to_vec();
        assert!(!ctx.verify(&config, &ring, &inner).encloses);
    }

    #[test]
    fn sampled_clusters_have_contours() {
        for spec in [TilingSpec::new(3, 7, 5), TilingSpec::new(4, 5, 4)] {
            let g = build_ball(&spec).unwrap();
            let mg = matching_graph(&g);
            let ctx = ContourContext::new(&mg);
            let mut checked = 0;
            for i in 0..100 {
                let config = sample(g.vertex_count(), 0.7, 3, i).unwrap();
                for xi in finite_interior_clusters(&mg, &config) {
                    let contour = ctx.outer_boundary(&config, &xi).unwrap();
                    assert!(ctx.verify(&config, &xi, &contour).ok(), "{xi:?}");
                    checked += 1;
                }
            }
            assert!(checked > 30, "{checked}");
        }
    }
}
