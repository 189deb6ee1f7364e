//! Exhaustive enumeration over the site configurations of small graphs.
//!
//! Probabilities of events that depend on `m` sites are polynomials of degree
//! at most `m` in `p`. They are kept in Bernstein form: the number of
//! configurations with `k` open sites in which the event holds.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::percolation::SiteGraph;
use crate::scalar::Scalar;

pub const MAX_ENUMERATION_SITES: usize = 24;

/// `Σ_k counts[k] · p^k (1 − p)^(m − k)` with `m = sites`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernsteinPoly {
    sites: usize,
    counts: Vec<u64>,
}

impl BernsteinPoly {
    pub fn zero(sites: usize) -> Self {
        BernsteinPoly { sites, counts: vec![0; sites + 1] }
    }

    /// The constant 1, an event that holds in every configuration.
    pub fn one() -> Self {
        BernsteinPoly { sites: 0, counts: vec![1] }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty());
        BernsteinPoly { sites: counts.len() - 1, counts }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Coefficients `a_j` of `Σ a_j p^j`.
    pub fn monomial(&self) -> Vec<BigInt> {
        let m = self.sites;
        let mut a = vec![BigInt::from(0); m + 1];
        for (k, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // p^k (1-p)^(m-k) = Σ_j C(m-k, j) (-1)^j p^(k+j)
            for j in 0..=m - k {
                let term = BigInt::from(c) * binomial(BigInt::from(m - k), BigInt::from(j));
                if j % 2 == 0 {
                    a[k + j] += term;
                } else {
                    a[k + j] -= term;
                }
            }
        }
        while a.len() > 1 && a.last().is_some_and(|x| *x == BigInt::from(0)) {
            a.pop();
        }
        a
    }

    pub fn eval<T: Scalar>(&self, p: &T) -> T {
        let m = self.sites;
        let q = T::one() - p.clone();
        let pp = powers(p, m);
        let qp = powers(&q, m);
        let mut acc = T::zero();
        for (k, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                acc = acc + T::from_count(c) * pp[k].clone() * qp[m - k].clone();
            }
        }
        acc
    }

    /// `d/dp` of [`BernsteinPoly::eval`].
    pub fn derivative<T: Scalar>(&self, p: &T) -> T {
        let m = self.sites;
        if m == 0 {
            return T::zero();
        }
        let q = T::one() - p.clone();
        let pp = powers(p, m);
        let qp = powers(&q, m);
        let mut acc = T::zero();
        for (k, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = T::from_count(c);
            if k > 0 {
                let kk = T::from_usize(k).expect("small");
                acc = acc + c.clone() * kk * pp[k - 1].clone() * qp[m - k].clone();
            }
            if k < m {
                let rest = T::from_usize(m - k).expect("small");
                acc = acc - c * rest * pp[k].clone() * qp[m - k - 1].clone();
            }
        }
        acc
    }

    /// Pointwise sum; both polynomials must be over the same sites.
    pub fn add_assign(&mut self, other: &BernsteinPoly) {
        assert_eq!(self.sites, other.sites);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

fn powers<T: Scalar>(x: &T, m: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(T::one());
    for i in 0..m {
        let next = out[i].clone() * x.clone();
        out.push(next);
    }
    out
}

/// Induced subgraph on at most [`MAX_ENUMERATION_SITES`] vertices, as
/// neighbour bitmasks over local indices.
#[derive(Debug, Clone)]
pub(crate) struct LocalGraph {
    pub vertices: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    pub masks: Vec<u32>,
}

impl LocalGraph {
    pub fn induced<G: SiteGraph>(g: &G, vertices: &[Vertex]) -> Result<Self> {
        if vertices.len() > MAX_ENUMERATION_SITES {
            return Err(Error::resource(format!(
                "exact enumeration over {} sites exceeds the limit of {MAX_ENUMERATION_SITES}",
                vertices.len()
            )));
        }
        let index: HashMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let masks = vertices
            .iter()
            .map(|&v| {
                let mut m = 0u32;
                g.for_each_neighbor(v, |u| {
                    if let Some(&j) = index.get(&u) {
                        m |= 1 << j;
                    }
                });
                m
            })
            .collect();
        Ok(LocalGraph { vertices: vertices.to_vec(), index, masks })
    }

    pub fn mask_of(&self, set: impl IntoIterator<Item = Vertex>) -> u32 {
        set.into_iter().filter_map(|v| self.index.get(&v)).fold(0, |m, &i| m | 1 << i)
    }

    /// Open sites reachable from `source` through open sites.
    pub fn reach(&self, open: u32, source: usize) -> u32 {
        let src = 1u32 << source;
        if open & src == 0 {
            return 0;
        }
        let mut reach = src;
        let mut frontier = src;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.masks[i];
            }
            next &= open & !reach;
            reach |= next;
            frontier = next;
        }
        reach
    }

    /// Calls `f(open, reach_from_source)` for every configuration in which
    /// `source` is open.
    pub fn for_each_reach(&self, source: usize, mut f: impl FnMut(u32, u32)) {
        let n = self.vertices.len();
        let low = (1u32 << source) - 1;
        for rest in 0..(1u64 << (n - 1)) {
            let rest = rest as u32;
            let open = (rest & low) | ((rest & !low) << 1) | (1 << source);
            f(open, self.reach(open, source));
        }
    }
}

/// `P_p(source ↔ targets)` in `g`, every vertex of `g` being a site.
pub fn exact_connection_poly<G: SiteGraph>(g: &G, source: Vertex, targets: &[Vertex]) -> Result<BernsteinPoly> {
    let all: Vec<Vertex> = (0..g.vertex_count() as Vertex).collect();
    let local = LocalGraph::induced(g, &all)?;
    if source as usize >= all.len() {
        return Err(Error::precondition(format!("source {source} is not a vertex")));
    }
    let tmask = local.mask_of(targets.iter().copied());
    let mut poly = BernsteinPoly::zero(all.len());
    local.for_each_reach(source as usize, |open, reach| {
        if reach & tmask != 0 {
            poly.counts[open.count_ones() as usize] += 1;
        }
    });
    Ok(poly)
}
