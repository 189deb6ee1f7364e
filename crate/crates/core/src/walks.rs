//! Turn-rule walks.
//!
//! At each vertex the walk leaves along the edge a fixed number of rotation
//! slots away from the edge it arrived on. With counterclockwise rotations, a
//! shift of `+k` sweeps `k` corners on the right of the walk and `d − k` on the
//! left. Walks stop at boundary-flagged vertices and report truncation.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::local_face_degree;
use crate::graph::{HalfEdge, RotationGraph, Side, Vertex};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkRule {
    /// Leave along label `a + k mod deg`, where `a` is the arrival label.
    /// Supported shifts: `+3`, `−3` (degrees at least 6) and `+2` (degrees and
    /// face degrees at least 4).
    LabelShift(i64),
    /// Leave so that exactly `count` corners lie on `side`; the angle
    /// condition is checked at every step.
    FacesOnSide { side: Side, count: usize },
}

impl WalkRule {
    fn validate(&self) -> Result<()> {
        match *self {
            WalkRule::LabelShift(3 | -3 | 2) => Ok(()),
            WalkRule::LabelShift(k) => Err(Error::precondition(format!("unsupported label shift {k:+}"))),
            WalkRule::FacesOnSide { count: 0, .. } => {
                Err(Error::precondition("faces_on_side needs a positive count"))
            }
            WalkRule::FacesOnSide { .. } => Ok(()),
        }
    }

    /// Slot offset from the arrival slot at a vertex of degree `d`.
    fn offset(&self, d: usize) -> usize {
        let d = d as i64;
        let k = match *self {
            WalkRule::LabelShift(k) => k,
            WalkRule::FacesOnSide { side: Side::Right, count } => count as i64,
            WalkRule::FacesOnSide { side: Side::Left, count } => -(count as i64),
        };
        k.rem_euclid(d) as usize
    }
}

impl fmt::Display for WalkRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkRule::LabelShift(k) => write!(f, "{k:+}"),
            WalkRule::FacesOnSide { side: Side::Left, count } => write!(f, "L{count}"),
            WalkRule::FacesOnSide { side: Side::Right, count } => write!(f, "R{count}"),
        }
    }
}

impl FromStr for WalkRule {
    type Err = Error;

    /// `+3`, `-3`, `+2`, or `L<k>` / `R<k>` for face counts.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::precondition(format!("cannot parse walk rule '{s}'"));
        let rule = if let Some(rest) = s.strip_prefix(['L', 'l']) {
            WalkRule::FacesOnSide { side: Side::Left, count: rest.parse().map_err(|_| bad())? }
        } else if let Some(rest) = s.strip_prefix(['R', 'r']) {
            WalkRule::FacesOnSide { side: Side::Right, count: rest.parse().map_err(|_| bad())? }
        } else {
            WalkRule::LabelShift(s.parse().map_err(|_| bad())?)
        };
        rule.validate()?;
        Ok(rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub path: Vec<Vertex>,
    /// The walk stopped at a boundary-flagged vertex.
    pub truncated: bool,
}

/// Corners at `v` strictly on `side` of the transition `in_edge → out_edge`.
///
/// A walk that turns straight back (`in_edge.from == out_edge.to`) has all
/// corners on its right.
pub fn faces_between(
    g: &RotationGraph,
    v: Vertex,
    in_edge: HalfEdge,
    out_edge: HalfEdge,
    side: Side,
) -> Result<usize> {
    if in_edge.to != v || out_edge.from != v {
        return Err(Error::precondition(format!("edges are not incident to {v} as in/out edges")));
    }
    let not_edge = |h: HalfEdge| Error::precondition(format!("{} -> {} is not an edge", h.from, h.to));
    let s_in = g.slot_of(v, in_edge.from).ok_or_else(|| not_edge(in_edge))?;
    let s_out = g.slot_of(v, out_edge.to).ok_or_else(|| not_edge(out_edge))?;
    let d = g.degree(v);
    let right = match (s_out + d - s_in) % d {
        0 => d,
        r => r,
    };
    Ok(match side {
        Side::Right => right,
        Side::Left => d - right,
    })
}

/// Sum of `(|f|−2)/|f|` over the corners of `v` in slots `from..from+len`
/// (cyclically); `None` if one of those faces crosses the truncation.
fn corner_angle(g: &RotationGraph, v: Vertex, from: usize, len: usize) -> Option<Rational> {
    let rot = g.rotation(v);
    let d = rot.len();
    let mut total = Rational::from_integer(0);
    for i in 0..len {
        let f = local_face_degree(g, HalfEdge::new(v, rot[(from + i) % d]))? as i64;
        total += Rational::new(f - 2, f);
    }
    Some(total)
}

fn check_step(g: &RotationGraph, rule: &WalkRule, v: Vertex, s_in: usize, s_out: usize) -> Result<()> {
    let d = g.degree(v);
    let fail = |reason: String| Err(Error::DegreeCondition { vertex: v, reason });
    match *rule {
        WalkRule::LabelShift(3 | -3) => {
            if d < 6 {
                return fail(format!("degree {d} < 6"));
            }
        }
        WalkRule::LabelShift(_) => {
            if d < 4 {
                return fail(format!("degree {d} < 4"));
            }
            for s in 0..d {
                match local_face_degree(g, HalfEdge::new(v, g.rotation(v)[s])) {
                    Some(f) if f >= 4 => {}
                    Some(f) => return fail(format!("incident face of degree {f} < 4")),
                    None => return fail("incident face crosses the truncation".into()),
                }
            }
        }
        WalkRule::FacesOnSide { .. } => {
            let right = (s_out + d - s_in) % d;
            let one = Rational::from_integer(1);
            let r = corner_angle(g, v, s_in, right);
            let l = corner_angle(g, v, s_out, d - right);
            match (r, l) {
                (Some(r), Some(l)) if r >= one && l >= one => {}
                (Some(r), Some(l)) => {
                    return fail(format!("angle sums {r}π (right) and {l}π (left) not both ≥ π"))
                }
                _ => return fail("incident face crosses the truncation".into()),
            }
        }
    }
    Ok(())
}

/// Walks from `start.from` along `start`, then by `rule`, for at most
/// `max_steps` edges. The returned path is checked to be self-avoiding.
pub fn turn_walk(g: &RotationGraph, start: HalfEdge, rule: WalkRule, max_steps: usize) -> Result<Walk> {
    rule.validate()?;
    if g.slot_of(start.from, start.to).is_none() {
        return Err(Error::precondition(format!("{} -> {} is not an edge", start.from, start.to)));
    }
    let mut path = vec![start.from];
    if max_steps == 0 {
        return Ok(Walk { path, truncated: false });
    }
    let mut seen: HashSet<Vertex> = [start.from].into_iter().collect();
    let (mut prev, mut cur) = (start.from, start.to);
    for step in 1..=max_steps {
        if !seen.insert(cur) {
            return Err(Error::invariant(format!("walk revisits vertex {cur} at step {step}")));
        }
        path.push(cur);
        if g.is_boundary(cur) {
            return Ok(Walk { path, truncated: true });
        }
        if step == max_steps {
            break;
        }
        let d = g.degree(cur);
        let s_in = g.slot_of(cur, prev).expect("arrival edge exists");
        let s_out = (s_in + rule.offset(d)) % d;
        check_step(g, &rule, cur, s_in, s_out)?;
        prev = cur;
        cur = g.rotation(cur)[s_out];
    }
    Ok(Walk { path, truncated: false })
}
