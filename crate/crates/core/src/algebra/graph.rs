//! Couplings induced by bipartite graphs (partial sumsets).

use std::collections::{BTreeMap, BTreeSet};

use super::dist::{ratio, Joint};
use super::structure::{Carrier, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<Element>,
    right: Vec<Element>,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: Vec<Element>, right: Vec<Element>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= left.len() {
                return Err(Error::IndexOutOfRange { index: a, arity: left.len() });
            }
            if b >= right.len() {
                return Err(Error::IndexOutOfRange { index: b, arity: right.len() });
            }
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    /// The complete bipartite graph on `left x right`.
    pub fn complete(left: Vec<Element>, right: Vec<Element>) -> Result<Self> {
        let edges = (0..left.len())
            .flat_map(|a| (0..right.len()).map(move |b| (a, b)))
            .collect();
        BipartiteGraph::new(left, right, edges)
    }

    pub fn left(&self) -> &[Element] {
        &self.left
    }

    pub fn right(&self) -> &[Element] {
        &self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn degrees(&self, side: usize) -> Vec<usize> {
        let n = if side == 0 { self.left.len() } else { self.right.len() };
        let mut deg = vec![0; n];
        for &(a, b) in &self.edges {
            deg[if side == 0 { a } else { b }] += 1;
        }
        deg
    }

    /// Every left vertex has the same (positive) degree.
    pub fn is_left_regular(&self) -> bool {
        let d = self.degrees(0);
        d.iter().all(|&x| x > 0 && x == d[0])
    }

    pub fn is_right_regular(&self) -> bool {
        let d = self.degrees(1);
        d.iter().all(|&x| x > 0 && x == d[0])
    }
}

/// A uniform-on-edges coupling together with its regularity flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCoupling {
    pub joint: Joint,
    /// The X-marginal is uniform on the left vertex list.
    pub left_regular: bool,
    /// The Y-marginal is uniform on the right vertex list.
    pub right_regular: bool,
}

/// Samples an edge uniformly at random; X is its left end, Y its right end.
pub fn graph_coupling(g: &BipartiteGraph, carrier: Carrier) -> Result<GraphCoupling> {
    let canon = |v: &[Element]| -> Result<Vec<Element>> {
        let out = v.iter().map(|e| carrier.canonicalize(e.coords())).collect::<Result<Vec<_>>>()?;
        let mut seen = BTreeSet::new();
        for e in &out {
            if !seen.insert(e) {
                return Err(Error::DuplicateElement(e.to_string()));
            }
        }
        Ok(out)
    };
    let left = canon(&g.left)?;
    let right = canon(&g.right)?;
    let w = ratio(1, g.edges.len() as i64);
    let atoms: BTreeMap<_, _> = g
        .edges
        .iter()
        .map(|&(a, b)| (vec![left[a].clone(), right[b].clone()], w.clone()))
        .collect();
    let joint = Joint::new(carrier, 2, atoms)?;
    Ok(GraphCoupling { joint, left_regular: g.is_left_regular(), right_regular: g.is_right_regular() })
}
