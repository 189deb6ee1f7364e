//! Embedded trees grown by the local turn rules.
//!
//! Vertices are labelled by words over `{0, ½, 1}`. The root gets two
//! children sharing a face. Afterwards a vertex whose label ends in `0` or `½`
//! has children `·0, ·1`, and one ending in `1` has children `·0, ·½, ·1`.
//! Child positions are fixed rotation offsets from the parent's slot, so that
//! every continuation path `v_b, v_{bc}, v_{bcc}, …` turns through exactly
//! `k` faces on one side (`k = 3` under condition 1, `k = 2` under
//! condition 2).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::local_face_degree;
use crate::graph::{HalfEdge, RotationGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Zero,
    Half,
    One,
}

impl Letter {
    fn index(self) -> usize {
        match self {
            Letter::Zero => 0,
            Letter::Half => 1,
            Letter::One => 2,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::Half => 'h',
            Letter::One => '1',
        }
    }
}

/// A word over `{0, ½, 1}`; `½` is written `h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Label(pub Vec<Letter>);

impl Label {
    pub fn root() -> Self {
        Label(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn child(&self, l: Letter) -> Label {
        let mut w = self.0.clone();
        w.push(l);
        Label(w)
    }

    pub fn parent(&self) -> Option<Label> {
        (!self.0.is_empty()).then(|| Label(self.0[..self.0.len() - 1].to_vec()))
    }

    /// `½` only at positions `j ≥ 2` right after a `1`.
    pub fn is_legal(&self) -> bool {
        self.0.iter().enumerate().all(|(j, &l)| l != Letter::Half || (j >= 1 && self.0[j - 1] == Letter::One))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "()" || s.is_empty() {
            return Ok(Label::root());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(Letter::Zero),
                'h' | 'H' => Ok(Letter::Half),
                '1' => Ok(Letter::One),
                _ => Err(Error::precondition(format!("bad label letter '{c}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Label)
    }
}

/// Degree condition under which the tree is grown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// Vertex degrees at least 7.
    One,
    /// Vertex degrees at least 5 and face degrees at least 4.
    Two,
}

impl Condition {
    /// Faces swept on one side by every continuation path.
    fn turn(self) -> i64 {
        match self {
            Condition::One => 3,
            Condition::Two => 2,
        }
    }

    fn check(self, g: &RotationGraph, v: Vertex) -> Result<()> {
        let d = g.degree(v);
        let fail = |reason: String| Err(Error::DegreeCondition { vertex: v, reason });
        match self {
            Condition::One if d < 7 => fail(format!("degree {d} < 7")),
            Condition::One => Ok(()),
            Condition::Two if d < 5 => fail(format!("degree {d} < 5")),
            Condition::Two => {
                for &u in g.rotation(v) {
                    match local_face_degree(g, HalfEdge::new(v, u)) {
                        Some(f) if f >= 4 => {}
                        Some(f) => return fail(format!("incident face of degree {f} < 4")),
                        None => return fail("incident face crosses the truncation".into()),
                    }
                }
                Ok(())
            }
        }
    }

    /// Children of a non-root node as `(slot offset from parent, letter)`.
    fn children(self, kind: Letter) -> Vec<(i64, Letter)> {
        let k = self.turn();
        match kind {
            Letter::Zero => vec![(k, Letter::Zero), (k + 1, Letter::One)],
            Letter::Half => vec![(-k - 1, Letter::Zero), (-k, Letter::One)],
            Letter::One => vec![(-k - 2, Letter::Zero), (-k - 1, Letter::Half), (-k, Letter::One)],
        }
    }
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Condition::One),
            "2" => Ok(Condition::Two),
            _ => Err(Error::precondition(format!("condition must be 1 or 2, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub label: Label,
    pub vertex: Vertex,
    pub parent: Option<usize>,
    pub level: usize,
}

/// A tree embedded in the graph, with label-indexed vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeEmbedding {
    pub root: Vertex,
    pub condition: Condition,
    pub nodes: Vec<TreeNode>,
    /// Node indices per level.
    pub levels: Vec<Vec<usize>>,
    /// Some branch stopped at a boundary-flagged vertex.
    pub truncated: bool,
    /// Grown with clockwise slot offsets (the mirror image of the rules).
    #[serde(default)]
    pub mirrored: bool,
    #[serde(skip)]
    by_vertex: HashMap<Vertex, usize>,
    #[serde(skip)]
    by_label: HashMap<Label, usize>,
}

impl TreeEmbedding {
    fn empty(root: Vertex, condition: Condition) -> Self {
        TreeEmbedding {
            root,
            condition,
            nodes: Vec::new(),
            levels: Vec::new(),
            truncated: false,
            mirrored: false,
            by_vertex: HashMap::new(),
            by_label: HashMap::new(),
        }
    }

    fn push(&mut self, label: Label, vertex: Vertex, parent: Option<usize>, level: usize) -> Result<usize> {
        let id = self.nodes.len();
        if let Some(&other) = self.by_vertex.get(&vertex) {
            return Err(Error::invariant(format!(
                "tree paths collide at vertex {vertex} (labels {} and {label})",
                self.nodes[other].label
            )));
        }
        self.by_vertex.insert(vertex, id);
        self.by_label.insert(label.clone(), id);
        if self.levels.len() <= level {
            self.levels.resize(level + 1, Vec::new());
        }
        self.levels[level].push(id);
        self.nodes.push(TreeNode { label, vertex, parent, level });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex_of(&self, label: &Label) -> Option<Vertex> {
        self.by_label.get(label).map(|&i| self.nodes[i].vertex)
    }

    pub fn node_at(&self, v: Vertex) -> Option<&TreeNode> {
        self.by_vertex.get(&v).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.by_vertex.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.nodes.iter().map(|n| n.vertex)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.nodes
            .iter()
            .filter_map(|n| n.parent.map(|p| (self.nodes[p].vertex, n.vertex)))
    }

    /// Number of tree edges at `v`.
    pub fn tree_degree(&self, v: Vertex) -> usize {
        let Some(&i) = self.by_vertex.get(&v) else { return 0 };
        let children = self.nodes.iter().filter(|n| n.parent == Some(i)).count();
        children + usize::from(self.nodes[i].parent.is_some())
    }

    /// Tree degree of every node, computed in one pass.
    pub fn tree_degrees(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = self.nodes.iter().map(|n| usize::from(n.parent.is_some())).collect();
        for n in &self.nodes {
            if let Some(p) = n.parent {
                deg[p] += 1;
            }
        }
        deg
    }

    /// Whether the node has all its children (it was expanded, not cut off).
    pub fn is_expanded(&self, idx: usize) -> bool {
        self.nodes.iter().any(|n| n.parent == Some(idx))
    }

    /// `(n₀, n½, n₁)` per level, by last letter (the root level is all zeros).
    pub fn census(&self) -> Vec<[usize; 3]> {
        self.levels
            .iter()
            .map(|lvl| {
                let mut c = [0; 3];
                for &i in lvl {
                    if let Some(l) = self.nodes[i].label.last() {
                        c[l.index()] += 1;
                    }
                }
                c
            })
            .collect()
    }

    /// `π_b`: parent of `v_b`, then `v_b`, then the continuation along the
    /// last letter (`0` continues with `0`, `½` and `1` continue with `1`),
    /// as far as the tree was grown.
    pub fn path(&self, label: &Label) -> Option<Vec<Vertex>> {
        let last = label.last()?;
        let cont = if last == Letter::Zero { Letter::Zero } else { Letter::One };
        let mut out = vec![self.vertex_of(&label.parent()?)?, self.vertex_of(label)?];
        let mut cur = label.child(cont);
        while let Some(v) = self.vertex_of(&cur) {
            out.push(v);
            cur = cur.child(cont);
        }
        Some(out)
    }

    fn rebuild_indices(&mut self) {
        self.by_vertex = self.nodes.iter().enumerate().map(|(i, n)| (n.vertex, i)).collect();
        self.by_label = self.nodes.iter().enumerate().map(|(i, n)| (n.label.clone(), i)).collect();
    }

    /// Restores lookup tables after deserialization.
    pub fn reindexed(mut self) -> Self {
        self.rebuild_indices();
        self
    }
}

/// Breadth-first expansion of every queued node below `spawn_limit`.
fn expand(g: &RotationGraph, t: &mut TreeEmbedding, start: usize, spawn_limit: usize) -> Result<()> {
    let mut head = start;
    while head < t.nodes.len() {
        let idx = head;
        head += 1;
        let node = &t.nodes[idx];
        if node.level >= spawn_limit {
            continue;
        }
        let (v, level, label) = (node.vertex, node.level, node.label.clone());
        if g.is_boundary(v) {
            t.truncated = true;
            continue;
        }
        t.condition.check(g, v)?;
        let parent_vertex = match node.parent {
            Some(p) => t.nodes[p].vertex,
            None => return Err(Error::invariant("expand called on a parentless node")),
        };
        let kind = label.last().unwrap_or(Letter::Zero);
        let d = g.degree(v);
        let ps = g.slot_of(v, parent_vertex).expect("tree edge is a graph edge");
        let sign = if t.mirrored { -1 } else { 1 };
        for (off, letter) in t.condition.children(kind) {
            let c = g.rotation(v)[(ps as i64 + sign * off).rem_euclid(d as i64) as usize];
            t.push(label.child(letter), c, Some(idx), level + 1)?;
        }
    }
    Ok(())
}

/// Grows the tree at `root`, whose first two children are the neighbours in
/// rotation slots `start_slot` and `start_slot + 1`.
///
/// `depth_cap = 0` gives the root and its two children; each further unit of
/// cap adds one level. Branches stop at boundary-flagged vertices.
pub fn grow_tree(
    g: &RotationGraph,
    root: Vertex,
    start_slot: usize,
    condition: Condition,
    depth_cap: usize,
) -> Result<TreeEmbedding> {
    if (root as usize) >= g.vertex_count() {
        return Err(Error::precondition(format!("root {root} out of range")));
    }
    if g.is_boundary(root) {
        return Err(Error::precondition(format!("root {root} is on the truncation boundary")));
    }
    condition.check(g, root)?;
    let d = g.degree(root);
    let mut t = TreeEmbedding::empty(root, condition);
    let r = t.push(Label::root(), root, None, 0)?;
    let v0 = g.rotation(root)[start_slot % d];
    let v1 = g.rotation(root)[(start_slot + 1) % d];
    t.push(Label(vec![Letter::Zero]), v0, Some(r), 1)?;
    t.push(Label(vec![Letter::One]), v1, Some(r), 1)?;
    expand(g, &mut t, 1, depth_cap + 1)?;
    Ok(t)
}

/// Grows the subtree hanging at `apex`, entered from `parent`, which is
/// expanded like a `0`-node: children at offsets `k` and `k + 1` from the
/// parent slot. The parent is not part of the returned tree. `depth_cap` is
/// the number of levels below the apex. With `mirrored`, all offsets are
/// negated, which is the same as growing on the mirrored graph.
pub fn grow_hanging_tree(
    g: &RotationGraph,
    parent: Vertex,
    apex: Vertex,
    condition: Condition,
    depth_cap: usize,
    mirrored: bool,
) -> Result<TreeEmbedding> {
    if g.slot_of(apex, parent).is_none() {
        return Err(Error::precondition(format!("{parent} and {apex} are not adjacent")));
    }
    let mut t = TreeEmbedding::empty(apex, condition);
    t.mirrored = mirrored;
    t.push(Label::root(), apex, None, 0)?;
    if depth_cap == 0 {
        return Ok(t);
    }
    if g.is_boundary(apex) {
        t.truncated = true;
        return Ok(t);
    }
    condition.check(g, apex)?;
    let d = g.degree(apex) as i64;
    let ps = g.slot_of(apex, parent).expect("checked above") as i64;
    let sign = if mirrored { -1 } else { 1 };
    for (off, letter) in condition.children(Letter::Zero) {
        let c = g.rotation(apex)[(ps + sign * off).rem_euclid(d) as usize];
        t.push(Label(vec![letter]), c, Some(0), 1)?;
    }
    expand(g, &mut t, 1, depth_cap)?;
    Ok(t)
}

/// Children per type, rows and columns ordered `0, ½, 1`.
pub fn type_matrix() -> [[u32; 3]; 3] {
    let mut m = [[0; 3]; 3];
    for kind in [Letter::Zero, Letter::Half, Letter::One] {
        for (_, child) in Condition::One.children(kind) {
            m[kind.index()][child.index()] += 1;
        }
    }
    m
}

/// Level census `(n₀, n½, n₁)` for levels `1..=levels` from the type matrix.
pub fn census_recursion(levels: usize) -> Vec<[u64; 3]> {
    let m = type_matrix();
    let mut out = Vec::with_capacity(levels);
    let mut cur = [1u64, 0, 1];
    for _ in 0..levels {
        out.push(cur);
        let mut next = [0u64; 3];
        for (from, &count) in cur.iter().enumerate() {
            for to in 0..3 {
                next[to] += count * m[from][to] as u64;
            }
        }
        cur = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreePc<T> {
    /// Perron root of the type matrix (the growth rate of the tree).
    pub perron_root: T,
    /// Site percolation threshold `1/λ`.
    pub p_c: T,
    /// Closed-form upper bound `2^{−2/3}·3^{−1/3}`.
    pub paper_bound: T,
}

/// Critical site probability of the labelled tree from the Perron root of
/// its type matrix. Newton's method on the characteristic polynomial, started
/// above every eigenvalue (the largest row sum), converges monotonically to
/// the Perron root.
pub fn tree_pc<T: Float>() -> TreePc<T> {
    let m = type_matrix();
    let a = |i: usize, j: usize| T::from(m[i][j]).expect("small integer");
    // λ³ + c2·λ² + c1·λ + c0
    let trace = a(0, 0) + a(1, 1) + a(2, 2);
    let minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)
        + a(1, 1) * a(2, 2)
        - a(1, 2) * a(2, 1);
    let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    let (c2, c1, c0) = (-trace, minors, -det);
    let three = T::from(3).unwrap();
    let two = T::from(2).unwrap();
    let mut x = (0..3)
        .map(|i| a(i, 0) + a(i, 1) + a(i, 2))
        .fold(T::zero(), T::max);
    for _ in 0..200 {
        let f = ((x + c2) * x + c1) * x + c0;
        let df = (three * x + two * c2) * x + c1;
        let next = x - f / df;
        if (next - x).abs() <= T::epsilon() * x {
            x = next;
            break;
        }
        x = next;
    }
    let paper_bound = T::one() / (two.powf(two / three) * three.powf(T::one() / three));
    TreePc { perron_root: x, p_c: T::one() / x, paper_bound }
}
