//! Generators: balls of regular `{p,q}` tilings, reference trees and small
//! hand-made fixtures.
//!
//! Balls are grown layer by layer. The current patch is always a closed disk
//! whose boundary is kept as a cyclic doubly linked list. Completing a vertex
//! attaches tiles along its outer gap; each tile swallows the maximal run of
//! boundary vertices that have exactly one tile slot left, which is the only
//! way such a vertex can still receive its last tile.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{RotationGraph, Vertex, UNREACHABLE};

pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;

/// Face degree `p`, vertex degree `q`, and ball radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingSpec {
    pub face_degree: usize,
    pub vertex_degree: usize,
    pub radius: usize,
    /// Permits parameters outside the negatively curved regime, e.g. the flat
    /// `{4,4}` control.
    #[serde(default)]
    pub allow_non_hyperbolic: bool,
}

impl TilingSpec {
    pub fn new(face_degree: usize, vertex_degree: usize, radius: usize) -> Self {
        TilingSpec { face_degree, vertex_degree, radius, allow_non_hyperbolic: false }
    }

    /// Flat or otherwise non-hyperbolic control parameters.
    pub fn control(face_degree: usize, vertex_degree: usize, radius: usize) -> Self {
        TilingSpec { face_degree, vertex_degree, radius, allow_non_hyperbolic: true }
    }

    /// Minimal vertex degree at least 7, or at least 5 with faces of degree at
    /// least 4.
    pub fn in_negative_curvature_regime(&self) -> bool {
        let (p, q) = (self.face_degree, self.vertex_degree);
        (q >= 7 && p >= 3) || (q >= 5 && p >= 4)
    }

    pub fn validate(&self) -> Result<()> {
        let (p, q) = (self.face_degree, self.vertex_degree);
        if p < 3 || q < 3 {
            return Err(Error::precondition(format!("{{{p},{q}}}: need p >= 3 and q >= 3")));
        }
        if !self.in_negative_curvature_regime() && !self.allow_non_hyperbolic {
            return Err(Error::precondition(format!(
                "{{{p},{q}}} is outside the negatively curved regime; flag it as a control to build it"
            )));
        }
        // 1/p + 1/q > 1/2 closes up into a sphere; the disk grower cannot
        // represent that.
        if 2 * (p + q) > p * q {
            return Err(Error::precondition(format!("{{{p},{q}}} is spherical")));
        }
        Ok(())
    }

    /// Curvature of interior vertices in units of π: `2 − q·(p−2)/p`.
    pub fn interior_curvature(&self) -> crate::Rational {
        let p = self.face_degree as i64;
        let q = self.vertex_degree as i64;
        crate::Rational::from_integer(2) - crate::Rational::new(q * (p - 2), p)
    }
}

struct Grower {
    p: usize,
    q: usize,
    budget: usize,
    rot: Vec<SmallVec<[Vertex; 8]>>,
    remaining: Vec<u32>,
    on_boundary: Vec<bool>,
    next: Vec<Vertex>,
    prev: Vec<Vertex>,
}

impl Grower {
    fn new(p: usize, q: usize, budget: usize) -> Self {
        Grower {
            p,
            q,
            budget,
            rot: Vec::new(),
            remaining: Vec::new(),
            on_boundary: Vec::new(),
            next: Vec::new(),
            prev: Vec::new(),
        }
    }

    fn push_vertex(&mut self) -> Result<Vertex> {
        if self.rot.len() >= self.budget {
            return Err(Error::resource(format!(
                "patch exceeds the vertex budget of {}",
                self.budget
            )));
        }
        let v = self.rot.len() as Vertex;
        self.rot.push(SmallVec::new());
        self.remaining.push(self.q as u32);
        self.on_boundary.push(true);
        self.next.push(v);
        self.prev.push(v);
        Ok(v)
    }

    /// Root plus its first tile.
    fn seed(&mut self) -> Result<()> {
        let root = self.push_vertex()?;
        let mut cycle = vec![root];
        for _ in 1..self.p {
            cycle.push(self.push_vertex()?);
        }
        let n = cycle.len();
        for i in 0..n {
            let v = cycle[i];
            let nx = cycle[(i + 1) % n];
            let pv = cycle[(i + n - 1) % n];
            self.rot[v as usize].push(nx);
            self.rot[v as usize].push(pv);
            self.next[v as usize] = nx;
            self.prev[v as usize] = pv;
            self.remaining[v as usize] -= 1;
        }
        Ok(())
    }

    fn complete(&mut self, v: Vertex) -> Result<()> {
        while self.on_boundary[v as usize] && self.remaining[v as usize] > 0 {
            self.attach(v)?;
        }
        Ok(())
    }

    /// Attaches one tile on the outer side of the boundary edge `v → next(v)`.
    fn attach(&mut self, v: Vertex) -> Result<()> {
        let p = self.p;
        let mut run_start = v;
        let mut guard = 0usize;
        while self.remaining[run_start as usize] == 1 {
            run_start = self.prev[run_start as usize];
            guard += 1;
            if guard > p {
                return Err(Error::invariant("tile run wraps the whole boundary"));
            }
        }
        let mut run_end = self.next[v as usize];
        while self.remaining[run_end as usize] == 1 {
            run_end = self.next[run_end as usize];
            guard += 1;
            if guard > p {
                return Err(Error::invariant("tile run wraps the whole boundary"));
            }
        }
        let mut run = vec![run_start];
        let mut x = run_start;
        while x != run_end {
            x = self.next[x as usize];
            run.push(x);
            if run.len() > p {
                return Err(Error::invariant("boundary run longer than a tile"));
            }
        }
        let k = run.len() - 1;
        if k >= p || run_start == run_end {
            return Err(Error::invariant("boundary run does not fit in a tile"));
        }
        for &x in &run {
            if self.remaining[x as usize] == 0 {
                return Err(Error::invariant(format!("saturated vertex {x} still on boundary")));
            }
        }
        let m = p - k - 1;
        let first = run[0];
        let last = run[k];
        if m == 0 && self.rot[first as usize].contains(&last) {
            return Err(Error::invariant(format!("tile would duplicate edge {first}-{last}")));
        }
        let mut fresh = Vec::with_capacity(m);
        for _ in 0..m {
            fresh.push(self.push_vertex()?);
        }
        // outer path: last → fresh[0] → … → fresh[m-1] → first
        let toward_first = if m == 0 { last } else { fresh[m - 1] };
        let toward_last = if m == 0 { first } else { fresh[0] };
        self.rot[first as usize].insert(0, toward_first);
        self.rot[last as usize].push(toward_last);
        self.next[first as usize] = toward_first;
        self.prev[last as usize] = toward_last;
        for j in 0..m {
            let nv = fresh[j];
            let bnext = if j == 0 { last } else { fresh[j - 1] };
            let bprev = if j + 1 == m { first } else { fresh[j + 1] };
            let r = &mut self.rot[nv as usize];
            r.push(bnext);
            r.push(bprev);
            self.next[nv as usize] = bnext;
            self.prev[nv as usize] = bprev;
            self.remaining[nv as usize] -= 1;
        }
        for &x in &run {
            self.remaining[x as usize] -= 1;
        }
        for &x in &run[1..k] {
            self.on_boundary[x as usize] = false;
        }
        Ok(())
    }

    fn distances(&self) -> Vec<u32> {
        crate::graph::bfs_distances(self.rot.len(), [0], |v| self.rot[v as usize].iter().copied())
    }

    /// Relabels vertices in breadth-first order from the root.
    fn finish(self) -> RotationGraph {
        let n = self.rot.len();
        let mut new_id = vec![UNREACHABLE; n];
        let mut order = Vec::with_capacity(n);
        new_id[0] = 0;
        order.push(0 as Vertex);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &u in &self.rot[v as usize] {
                if new_id[u as usize] == UNREACHABLE {
                    new_id[u as usize] = order.len() as u32;
                    order.push(u);
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(self.rot.iter().map(|r| r.len()).sum());
        let mut boundary = Vec::with_capacity(n);
        offsets.push(0);
        for &old in &order {
            neighbors.extend(self.rot[old as usize].iter().map(|&u| new_id[u as usize]));
            offsets.push(neighbors.len());
            boundary.push(self.on_boundary[old as usize]);
        }
        RotationGraph::from_csr(offsets, neighbors, boundary)
    }
}

/// Builds the patch made of every tile incident to a vertex at distance less
/// than `radius` from the root (vertex 0).
///
/// For triangle tilings this is exactly the graph ball of that radius.
/// Vertices still missing tiles are boundary-flagged; every other vertex has
/// full degree `q` with all incident faces of degree `p`.
pub fn build_ball(spec: &TilingSpec) -> Result<RotationGraph> {
    build_ball_with_budget(spec, DEFAULT_VERTEX_BUDGET)
}

pub fn build_ball_with_budget(spec: &TilingSpec, budget: usize) -> Result<RotationGraph> {
    spec.validate()?;
    let mut grower = Grower::new(spec.face_degree, spec.vertex_degree, budget);
    if spec.radius == 0 {
        grower.push_vertex()?;
        return Ok(grower.finish());
    }
    grower.seed()?;
    for layer in 0..spec.radius as u32 {
        let dist = grower.distances();
        let targets: Vec<Vertex> = (0..grower.rot.len() as Vertex)
            .filter(|&v| dist[v as usize] == layer)
            .collect();
        for v in targets {
            grower.complete(v)?;
        }
    }
    Ok(grower.finish())
}

/// Tree whose root has `root_degree` children and whose other vertices have
/// `root_degree + 1` children, truncated at `depth` (leaves boundary-flagged).
pub fn build_reference_tree(root_degree: usize, depth: usize) -> Result<RotationGraph> {
    build_reference_tree_with_budget(root_degree, depth, DEFAULT_VERTEX_BUDGET)
}

pub fn build_reference_tree_with_budget(
    root_degree: usize,
    depth: usize,
    budget: usize,
) -> Result<RotationGraph> {
    if root_degree == 0 {
        return Err(Error::precondition("root degree must be at least 1"));
    }
    let mut rot: Vec<Vec<Vertex>> = vec![Vec::new()];
    let mut boundary = vec![depth == 0];
    let mut frontier = vec![0 as Vertex];
    for level in 1..=depth {
        let mut next_frontier = Vec::new();
        for &v in &frontier {
            let children = if v == 0 { root_degree } else { root_degree + 1 };
            for _ in 0..children {
                let c = rot.len() as Vertex;
                if rot.len() >= budget {
                    return Err(Error::resource(format!("tree exceeds the vertex budget of {budget}")));
                }
                rot.push(vec![v]);
                rot[v as usize].push(c);
                boundary.push(level == depth);
                next_frontier.push(c);
            }
        }
        frontier = next_frontier;
    }
    RotationGraph::new(rot, boundary)
}

/// Small hand-made graphs used across the test-suite.
pub mod fixtures {
    use super::*;

    fn graph(rot: Vec<Vec<Vertex>>, boundary: Vec<bool>) -> RotationGraph {
        RotationGraph::new(rot, boundary).expect("fixture is a valid rotation system")
    }

    /// Triangle 0,1,2 (counterclockwise), all vertices on the boundary.
    pub fn triangle() -> RotationGraph {
        graph(vec![vec![1, 2], vec![2, 0], vec![0, 1]], vec![true; 3])
    }

    /// Square a=0, b=1, c=2, d=3 (counterclockwise).
    pub fn square() -> RotationGraph {
        graph(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]], vec![true; 4])
    }

    /// Path 0 – 1 – … – (len−1). Endpoints are boundary-flagged; interior
    /// vertices carry their full degree 2, as in a segment of ℤ.
    pub fn path(len: usize) -> RotationGraph {
        assert!(len >= 2);
        let mut rot = Vec::with_capacity(len);
        let mut boundary = vec![false; len];
        for i in 0..len {
            let mut r = Vec::new();
            if i + 1 < len {
                r.push(i as Vertex + 1);
            }
            if i > 0 {
                r.push(i as Vertex - 1);
            }
            rot.push(r);
        }
        boundary[0] = true;
        boundary[len - 1] = true;
        graph(rot, boundary)
    }

    /// Star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> RotationGraph {
        let mut rot = vec![(1..=leaves as Vertex).collect::<Vec<_>>()];
        let mut boundary = vec![false];
        for _ in 0..leaves {
            rot.push(vec![0]);
            boundary.push(true);
        }
        graph(rot, boundary)
    }

    /// Two interior vertices `a = 0` and `c = 2` on opposite corners of the
    /// square `a, b, c, d`; each also borders a pentagon, and the outer face
    /// is the hexagon `b, L1, L2, d, R2, R1`.
    ///
    /// Ids: a=0, b=1, c=2, d=3, L1=4, L2=5, R1=6, R2=7.
    pub fn hexagon_with_diagonal_pair() -> RotationGraph {
        graph(
            vec![
                vec![1, 3],       // a
                vec![4, 0, 2, 6], // b
                vec![1, 3],       // c
                vec![7, 2, 0, 5], // d
                vec![5, 1],       // L1
                vec![3, 4],       // L2
                vec![1, 7],       // R1
                vec![6, 3],       // R2
            ],
            vec![false, true, false, true, true, true, true, true],
        )
    }

    /// Wheel: hub 0 with `spokes` rim vertices forming a cycle. The hub is
    /// interior; rim vertices are boundary-flagged.
    pub fn wheel(spokes: usize) -> RotationGraph {
        assert!(spokes >= 3);
        let n = spokes as Vertex;
        let mut rot = vec![(1..=n).collect::<Vec<_>>()];
        for i in 1..=n {
            let next = if i == n { 1 } else { i + 1 };
            let prev = if i == 1 { n } else { i - 1 };
            // counterclockwise at a rim vertex, interior sector first: next rim, hub, prev rim
            rot.push(vec![next, 0, prev]);
        }
        let mut boundary = vec![true; spokes + 1];
        boundary[0] = false;
        graph(rot, boundary)
    }

    /// `rows × cols` grid of squares; every vertex not on the outer rim is
    /// interior with degree 4.
    pub fn grid(rows: usize, cols: usize) -> RotationGraph {
        let w = cols + 1;
        let h = rows + 1;
        let id = |r: usize, c: usize| (r * w + c) as Vertex;
        let mut rot = Vec::with_capacity(w * h);
        let mut boundary = Vec::with_capacity(w * h);
        for r in 0..h {
            for c in 0..w {
                // counterclockwise: east, north, west, south (row index grows north)
                let mut all: Vec<Option<Vertex>> = vec![
                    (c + 1 < w).then(|| id(r, c + 1)),
                    (r + 1 < h).then(|| id(r + 1, c)),
                    (c > 0).then(|| id(r, c - 1)),
                    (r > 0).then(|| id(r - 1, c)),
                ];
                let on_rim = all.iter().any(Option::is_none);
                if on_rim {
                    // rotate so the missing directions sit between last and first
                    let gap = (0..4)
                        .find(|&i| all[i].is_none() && all[(i + 1) % 4].is_some())
                        .expect("rim vertex has a present neighbour");
                    all.rotate_left((gap + 1) % 4);
                }
                rot.push(all.into_iter().flatten().collect());
                boundary.push(on_rim);
            }
        }
        graph(rot, boundary)
    }
}
