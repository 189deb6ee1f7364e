//! Chandeliers and anti-chandeliers, and the alternating sequence of them
//! hung along a geodesic.
//!
//! A chandelier at `v` is the spine `v, v₁, v₂` with three faces on the left
//! at `v₁`, plus a condition-1 tree hanging at `v₂` whose two outermost
//! branches leave three faces outside on either side. The anti-chandelier is
//! the same object with left and right exchanged.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::local_face_degree;
use crate::graph::{HalfEdge, RotationGraph, Side, Vertex};
use crate::matching::local_star_neighbors;
use crate::tree::{grow_hanging_tree, Condition, Label, Letter, TreeEmbedding};
use crate::walks::faces_between;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Chandelier {
    pub root: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    /// `Left` for a chandelier, `Right` for an anti-chandelier.
    pub side: Side,
    pub subtree: TreeEmbedding,
    /// Outermost branch of the subtree on the chosen side, from `v₂`.
    pub l1: Vec<Vertex>,
    /// Outermost branch on the other side, from `v₂`.
    pub l2: Vec<Vertex>,
}

impl Chandelier {
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        [self.root, self.v1].into_iter().chain(self.subtree.vertices())
    }

    pub fn vertex_set(&self) -> HashSet<Vertex> {
        self.vertices().collect()
    }

    pub fn len(&self) -> usize {
        self.subtree.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        [(self.root, self.v1), (self.v1, self.v2)].into_iter().chain(self.subtree.edges())
    }

    /// Re-checks the defining properties against `g`.
    pub fn check(&self, g: &RotationGraph) -> Result<()> {
        let bad = |m: String| Err(Error::invariant(format!("chandelier at {}: {m}", self.root)));
        if self.subtree.contains(self.root) || self.subtree.contains(self.v1) {
            return bad("subtree reaches back to the spine".into());
        }
        let turn = faces_between(
            g,
            self.v1,
            HalfEdge::new(self.root, self.v1),
            HalfEdge::new(self.v1, self.v2),
            self.side,
        )?;
        if turn != 3 {
            return bad(format!("{turn} faces on the {:?} at v1, expected 3", self.side));
        }
        let a: HashSet<_> = self.l1.iter().collect();
        let common: Vec<_> = self.l2.iter().filter(|v| a.contains(v)).collect();
        if common != vec![&self.v2] {
            return bad("outer branches meet away from v2".into());
        }
        for (u, w) in self.edges() {
            if !g.are_adjacent(u, w) {
                return bad(format!("{u}-{w} is not an edge"));
            }
        }
        Ok(())
    }
}

fn branch(t: &TreeEmbedding, letter: Letter) -> Vec<Vertex> {
    let mut out = vec![t.root];
    let mut cur = Label::root().child(letter);
    while let Some(v) = t.vertex_of(&cur) {
        out.push(v);
        cur = cur.child(letter);
    }
    out
}

/// Builds the chandelier (`Left`) or anti-chandelier (`Right`) at `root`
/// starting along the edge to `v1`; `None` takes the first rotation slot.
/// `depth_cap` bounds the levels of the hanging tree below `v₂`; branches
/// also stop at boundary-flagged vertices.
pub fn build_chandelier(
    g: &RotationGraph,
    root: Vertex,
    v1: Option<Vertex>,
    side: Side,
    depth_cap: usize,
) -> Result<Chandelier> {
    if (root as usize) >= g.vertex_count() {
        return Err(Error::precondition(format!("root {root} out of range")));
    }
    if g.is_boundary(root) || g.degree(root) == 0 {
        return Err(Error::precondition(format!("patch too small: root {root} is on the boundary")));
    }
    let v1 = v1.unwrap_or(g.rotation(root)[0]);
    let Some(slot) = g.slot_of(v1, root) else {
        return Err(Error::precondition(format!("{root} and {v1} are not adjacent")));
    };
    if g.is_boundary(v1) {
        return Err(Error::precondition(format!("patch too small: v1 = {v1} is on the boundary")));
    }
    let d = g.degree(v1) as i64;
    if d < 7 {
        return Err(Error::DegreeCondition { vertex: v1, reason: format!("degree {d} < 7") });
    }
    let shift = match side {
        Side::Left => -3,
        Side::Right => 3,
    };
    let v2 = g.rotation(v1)[(slot as i64 + shift).rem_euclid(d) as usize];
    let subtree = grow_hanging_tree(g, v1, v2, Condition::One, depth_cap, side == Side::Right)?;
    let (l1, l2) = (branch(&subtree, Letter::One), branch(&subtree, Letter::Zero));
    let c = Chandelier { root, v1, v2, side, subtree, l1, l2 };
    c.check(g)?;
    Ok(c)
}

/// Chandeliers on both sides of a geodesic and the alternating selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChandelierSequence {
    pub geodesic: Vec<Vertex>,
    /// Chandeliers on the left, by increasing root index along the geodesic.
    pub left: Vec<Chandelier>,
    /// Anti-chandeliers on the right.
    pub right: Vec<Chandelier>,
    /// Alternating pairs `(left index, right index)`.
    pub pairs: Vec<(usize, usize)>,
}

impl ChandelierSequence {
    /// `⌊d/3⌋ − 1` (saturating), with `d` the geodesic length.
    pub fn required_pairs(&self) -> usize {
        ((self.geodesic.len() - 1) / 3).saturating_sub(1)
    }

    pub fn left_roots(&self) -> Vec<Vertex> {
        self.left.iter().map(|c| c.root).collect()
    }

    pub fn right_roots(&self) -> Vec<Vertex> {
        self.right.iter().map(|c| c.root).collect()
    }
}

fn check_geodesic(g: &RotationGraph, path: &[Vertex]) -> Result<()> {
    if path.len() < 2 {
        return Err(Error::precondition("geodesic needs at least one edge"));
    }
    let n = g.vertex_count();
    if path.iter().any(|&v| v as usize >= n) {
        return Err(Error::precondition("geodesic vertex out of range"));
    }
    let distinct: HashSet<_> = path.iter().collect();
    if distinct.len() != path.len() {
        return Err(Error::precondition("geodesic is not simple"));
    }
    for w in path.windows(2) {
        if !g.are_adjacent(w[0], w[1]) {
            return Err(Error::precondition(format!("{} -> {} is not an edge", w[0], w[1])));
        }
    }
    if let Some(&v) = path.iter().find(|&&v| g.is_boundary(v)) {
        return Err(Error::precondition(format!("geodesic vertex {v} is on the boundary")));
    }
    let len = path.len() - 1;
    let d = g.distances_from(path[0])[*path.last().unwrap() as usize];
    if d as usize != len {
        return Err(Error::precondition(format!("path of length {len} is not shortest (distance {d})")));
    }
    Ok(())
}

/// `(index on the path, root, first vertex a)` for each chandelier to build
/// on `side`; consecutive candidates with the same `a` share a chandelier
/// rooted at the first of them.
fn roots_on_side(g: &RotationGraph, path: &[Vertex], side: Side) -> Result<Vec<(usize, Vertex, Vertex)>> {
    let on_path: HashSet<_> = path.iter().copied().collect();
    let mut out: Vec<(usize, Vertex, Vertex)> = Vec::new();
    let mut last_a = None;
    for i in 1..path.len() - 1 {
        let (prev, z, next) = (path[i - 1], path[i], path[i + 1]);
        let count = faces_between(g, z, HalfEdge::new(prev, z), HalfEdge::new(z, next), side)?;
        if count < 2 {
            continue;
        }
        let d = g.degree(z) as i64;
        let ps = g.slot_of(z, prev).expect("path edge") as i64;
        let step = match side {
            Side::Left => -1,
            Side::Right => 1,
        };
        // corners between prev and the side edge; a face crossing the cut
        // means the side is open to infinity and gets no chandelier
        let corner_from = match side {
            Side::Left => (ps - 1).rem_euclid(d) as usize,
            Side::Right => ps as usize,
        };
        if local_face_degree(g, HalfEdge::new(z, g.rotation(z)[corner_from])).is_none() {
            last_a = None;
            continue;
        }
        let a = g.rotation(z)[(ps + step).rem_euclid(d) as usize];
        if on_path.contains(&a) {
            return Err(Error::invariant(format!("side neighbour {a} of {z} lies on the geodesic")));
        }
        if last_a != Some(a) {
            out.push((i, z, a));
        }
        last_a = Some(a);
    }
    Ok(out)
}

fn check_disjoint(list: &[Chandelier], label: &str) -> Result<()> {
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    for (i, c) in list.iter().enumerate() {
        for v in c.vertices() {
            if let Some(j) = owner.insert(v, i) {
                return Err(Error::invariant(format!(
                    "{label} chandeliers {j} and {i} share vertex {v}"
                )));
            }
        }
    }
    Ok(())
}

/// Vertices within `G*`-distance `k` of `from`, with their distances.
fn star_ball(g: &RotationGraph, from: &Chandelier, k: u8) -> HashMap<Vertex, u8> {
    let mut depth: HashMap<Vertex, u8> = from.vertices().map(|v| (v, 0)).collect();
    let mut queue: VecDeque<Vertex> = from.vertices().collect();
    while let Some(v) = queue.pop_front() {
        let dv = depth[&v];
        if dv == k {
            continue;
        }
        for u in local_star_neighbors(g, v) {
            depth.entry(u).or_insert_with(|| {
                queue.push_back(u);
                dv + 1
            });
        }
    }
    depth
}

/// Builds all chandeliers and anti-chandeliers along `geodesic`, checks that
/// each family is pairwise disjoint, and picks a longest alternating sequence
/// `R, U, R, U, …` starting at the first `R`, with increasing roots,
/// `G*`-distance at most 1 from each `R` to the following `U` and at most 3
/// from each `U` to the next `R`, all members pairwise disjoint.
pub fn chandelier_sequence(g: &RotationGraph, geodesic: &[Vertex], depth_cap: usize) -> Result<ChandelierSequence> {
    check_geodesic(g, geodesic)?;
    let mut built = Vec::new();
    let mut index_of = Vec::new();
    for side in [Side::Left, Side::Right] {
        let roots = roots_on_side(g, geodesic, side)?;
        let mut list = Vec::with_capacity(roots.len());
        let mut idx = Vec::with_capacity(roots.len());
        for (i, z, a) in roots {
            list.push(build_chandelier(g, z, Some(a), side, depth_cap)?);
            idx.push(i);
        }
        check_disjoint(&list, if side == Side::Left { "left" } else { "right" })?;
        built.push(list);
        index_of.push(idx);
    }
    let right = built.pop().expect("two sides");
    let left = built.pop().expect("two sides");
    let pairs = Alternation::new(g, &left, &right, &index_of[0], &index_of[1]).longest();
    Ok(ChandelierSequence { geodesic: geodesic.to_vec(), left, right, pairs })
}

/// Longest alternating chain. Nodes are `R`s (`0..nl`) and `U`s
/// (`nl..nl+nr`); an arc joins consecutive members that satisfy the root
/// order, the distance bound and are disjoint.
struct Alternation {
    nl: usize,
    succ: Vec<Vec<usize>>,
    sets: Vec<HashSet<Vertex>>,
}

impl Alternation {
    fn new(g: &RotationGraph, left: &[Chandelier], right: &[Chandelier], li: &[usize], ri: &[usize]) -> Self {
        let nl = left.len();
        let sets: Vec<HashSet<Vertex>> = left.iter().chain(right).map(Chandelier::vertex_set).collect();
        // meet in the middle: radius 2 around each R, radius 1 around each U
        let mut near_r: HashMap<Vertex, Vec<(usize, u8)>> = HashMap::new();
        for (a, r) in left.iter().enumerate() {
            for (v, d) in star_ball(g, r, 2) {
                near_r.entry(v).or_default().push((a, d));
            }
        }
        let mut r_to_u = vec![Vec::new(); nl];
        let mut u_to_r = vec![Vec::new(); right.len()];
        for (b, u) in right.iter().enumerate() {
            let mut to_u = HashSet::new();
            let mut to_r = HashSet::new();
            for (v, e) in star_ball(g, u, 1) {
                for &(a, d) in near_r.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                    if e == 0 && d <= 1 {
                        to_u.insert(a);
                    }
                    if d + e <= 3 {
                        to_r.insert(a);
                    }
                }
            }
            for a in to_u {
                if ri[b] > li[a] && sets[a].is_disjoint(&sets[nl + b]) {
                    r_to_u[a].push(nl + b);
                }
            }
            for a in to_r {
                if li[a] > ri[b] && sets[a].is_disjoint(&sets[nl + b]) {
                    u_to_r[b].push(a);
                }
            }
        }
        let mut succ: Vec<Vec<usize>> = r_to_u.into_iter().chain(u_to_r).collect();
        for s in &mut succ {
            s.sort_unstable();
        }
        Alternation { nl, succ, sets }
    }

    fn longest(&self) -> Vec<(usize, usize)> {
        if self.nl == 0 {
            return Vec::new();
        }
        // arcs only go forward along the geodesic, so memoized longest path is exact
        // for the consecutive constraints; disjointness of distant members is then checked
        let mut best: Vec<Option<(usize, Option<usize>)>> = vec![None; self.succ.len()];
        let chain = self.chain_from(0, &mut best);
        if self.all_disjoint(&chain) {
            return Self::to_pairs(&chain, self.nl);
        }
        let mut top = vec![0];
        let mut cur = vec![0];
        self.search(&mut cur, &mut top);
        Self::to_pairs(&top, self.nl)
    }

    fn chain_from(&self, start: usize, best: &mut Vec<Option<(usize, Option<usize>)>>) -> Vec<usize> {
        fn len(s: &Alternation, x: usize, best: &mut Vec<Option<(usize, Option<usize>)>>) -> usize {
            if let Some((l, _)) = best[x] {
                return l;
            }
            let mut out = (1, None);
            for &y in &s.succ[x] {
                let l = 1 + len(s, y, best);
                if l > out.0 {
                    out = (l, Some(y));
                }
            }
            best[x] = Some(out);
            out.0
        }
        len(self, start, best);
        let mut chain = vec![start];
        while let Some((_, Some(next))) = best[*chain.last().unwrap()] {
            chain.push(next);
        }
        chain
    }

    fn all_disjoint(&self, chain: &[usize]) -> bool {
        chain
            .iter()
            .enumerate()
            .all(|(i, &a)| chain[i + 1..].iter().all(|&b| self.sets[a].is_disjoint(&self.sets[b])))
    }

    fn search(&self, cur: &mut Vec<usize>, top: &mut Vec<usize>) {
        if cur.len() > top.len() {
            *top = cur.clone();
        }
        let last = *cur.last().unwrap();
        for &y in &self.succ[last] {
            if cur.iter().all(|&c| self.sets[c].is_disjoint(&self.sets[y])) {
                cur.push(y);
                self.search(cur, top);
                cur.pop();
            }
        }
    }

    fn to_pairs(chain: &[usize], nl: usize) -> Vec<(usize, usize)> {
        chain.chunks_exact(2).map(|w| (w[0], w[1] - nl)).collect()
    }
}
