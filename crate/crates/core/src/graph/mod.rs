//! Undirected multigraphs with stable vertex and edge identities.
//!
//! Every other module builds on [`MultiGraph`]: bases, covers, embedded
//! graphs and minors. Identifiers are dense integers handed out in
//! creation order and never reused, so data attached per edge (voltages,
//! rotations, signatures) survives deletions and contractions.

mod algo;
pub mod io;
pub mod iso;

pub use algo::{bipartition, blocks, connected_components, girth, is_connected, spanning_tree, Bipartition};
pub use iso::{find_isomorphism, find_isomorphism_with, find_subgraph_embedding, is_isomorphic, ISO_VERTEX_LIMIT};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not live")]
    DeadVertex(VertexId),
    #[error("edge {0} is not live")]
    DeadEdge(EdgeId),
    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(EdgeId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("isomorphism budget exceeded: {0} vertices (limit {limit})", limit = ISO_VERTEX_LIMIT)]
    IsoBudget(usize),
    #[error("search budget of {0} nodes exhausted")]
    SearchBudget(u64),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Undirected multigraph. Loops and parallel edges are allowed.
///
/// Dead vertices and edges keep their slot so identifiers stay stable.
#[derive(Clone, Debug, Default)]
pub struct MultiGraph {
    name: Option<String>,
    alive: Vec<bool>,
    edges: Vec<Option<(VertexId, VertexId)>>,
    // incident edge ids per vertex; a loop appears twice
    incidence: Vec<Vec<EdgeId>>,
}

impl PartialEq for MultiGraph {
    /// Structural equality on live elements and their identifiers. Names are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.vertices().eq(other.vertices()) && self.edges().eq(other.edges())
    }
}

impl Eq for MultiGraph {}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Builds a graph on `n` vertices from an endpoint list. Panics on out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v)).expect("endpoint out of range");
        }
        g
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.set_name(name);
        self
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.alive.len() as u32);
        self.alive.push(true);
        self.incidence.push(Vec::new());
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Some((u, v)));
        self.incidence[u.index()].push(id);
        self.incidence[v.index()].push(id);
        Ok(id)
    }

    /// Upper bound (exclusive) on vertex identifiers ever issued.
    pub fn vertex_bound(&self) -> usize {
        self.alive.len()
    }

    /// Upper bound (exclusive) on edge identifiers ever issued.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    pub fn has_edge_id(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e.index()), Some(Some(_)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|(u, v)| (EdgeId(i as u32), u, v)))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|(e, _, _)| e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(e.index()).copied().flatten()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.endpoints(e), Some((u, v)) if u == v)
    }

    /// The endpoint of `e` other than `v` (for a loop, `v` itself).
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// Incident edge ids of `v`; loops are listed twice.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.incidence.get(v.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    /// Neighbours of `v` with multiplicity (a loop contributes `v` twice).
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.incident(v)
            .iter()
            .map(|&e| self.opposite(e, v).expect("incidence is consistent"))
            .collect()
    }

    /// Distinct neighbours of `v`, excluding `v` itself.
    pub fn neighbor_set(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.neighbors(v).into_iter().filter(|&w| w != v).collect()
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .incident(u)
            .iter()
            .copied()
            .filter(|&e| self.opposite(e, u) == Some(v))
            .collect();
        out.dedup();
        out
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.incident(u).iter().any(|&e| self.opposite(e, u) == Some(v))
    }

    pub fn is_simple(&self) -> bool {
        self.simplicity_violation().is_none()
    }

    fn simplicity_violation(&self) -> Option<String> {
        let mut seen = BTreeSet::new();
        for (e, u, v) in self.edges() {
            if u == v {
                return Some(format!("edge {e} is a loop at {u}"));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Some(format!("parallel edges between {} and {}", key.0, key.1));
            }
        }
        None
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::DeadVertex(v))
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.endpoints(e).ok_or(GraphError::DeadEdge(e))
    }

    /// Removes `e` in place.
    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        let (u, v) = self.check_edge(e)?;
        self.edges[e.index()] = None;
        remove_one(&mut self.incidence[u.index()], e);
        remove_one(&mut self.incidence[v.index()], e);
        Ok(())
    }

    /// Removes `v` and all incident edges in place.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        let mut inc = self.incident(v).to_vec();
        inc.dedup();
        inc.sort();
        inc.dedup();
        for e in inc {
            self.remove_edge(e)?;
        }
        self.alive[v.index()] = false;
        Ok(())
    }

    /// Contracts `e` in place; see [`MultiGraph::contract_edge`]. Returns the surviving vertex.
    pub fn contract_in_place(&mut self, e: EdgeId, simplify: bool) -> Result<VertexId, GraphError> {
        let (u, v) = self.check_edge(e)?;
        if u == v {
            return Err(GraphError::LoopContraction(e));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        // parallels of e would become loops: drop them with e
        for p in self.edges_between(keep, gone) {
            self.remove_edge(p)?;
        }
        let moved = std::mem::take(&mut self.incidence[gone.index()]);
        for &f in &moved {
            if let Some((a, b)) = self.edges[f.index()] {
                let a = if a == gone { keep } else { a };
                let b = if b == gone { keep } else { b };
                self.edges[f.index()] = Some((a, b));
            }
        }
        self.incidence[keep.index()].extend(moved);
        self.alive[gone.index()] = false;
        if simplify {
            self.simplify_in_place();
        }
        Ok(keep)
    }

    /// Reduces every parallel class to its smallest edge id. Loops are kept.
    pub fn simplify_in_place(&mut self) {
        let mut seen = BTreeSet::new();
        let doomed: Vec<EdgeId> = self
            .edges()
            .filter(|&(_, u, v)| u != v && !seen.insert((u.min(v), u.max(v))))
            .map(|(e, _, _)| e)
            .collect();
        for e in doomed {
            self.remove_edge(e).expect("edge was live");
        }
    }

    /// Contract `e`, merging its endpoints into the smaller id. Edges parallel
    /// to `e` would become loops and are deleted; with `simplify` every
    /// remaining parallel class is reduced to one representative.
    pub fn contract_edge(&self, e: EdgeId, simplify: bool) -> Result<MultiGraph, GraphError> {
        let mut g = self.clone();
        g.contract_in_place(e, simplify)?;
        Ok(g)
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<MultiGraph, GraphError> {
        let mut g = self.clone();
        g.remove_vertex(v)?;
        Ok(g)
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<MultiGraph, GraphError> {
        let mut g = self.clone();
        g.remove_edge(e)?;
        Ok(g)
    }

    /// Dense relabelling: returns the compacted graph plus old→new vertex and edge maps.
    pub fn compact(&self) -> (MultiGraph, Vec<Option<VertexId>>, Vec<Option<EdgeId>>) {
        let mut vmap = vec![None; self.vertex_bound()];
        let mut g = MultiGraph::new();
        g.name = self.name.clone();
        for v in self.vertices() {
            vmap[v.index()] = Some(g.add_vertex());
        }
        let mut emap = vec![None; self.edge_bound()];
        for (e, u, v) in self.edges() {
            let nu = vmap[u.index()].unwrap();
            let nv = vmap[v.index()].unwrap();
            emap[e.index()] = Some(g.add_edge(nu, nv).unwrap());
        }
        (g, vmap, emap)
    }

    pub fn is_compact(&self) -> bool {
        self.alive.iter().all(|&a| a) && self.edges.iter().all(Option::is_some)
    }

    /// Subgraph on the given vertices keeping identifiers (other vertices die).
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = self.clone();
        let doomed: Vec<VertexId> = self.vertices().filter(|v| !keep.contains(v)).collect();
        for v in doomed {
            g.remove_vertex(v).unwrap();
        }
        g
    }

    /// Keeps exactly the given edges and their endpoints, preserving identifiers.
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> MultiGraph {
        let mut g = self.clone();
        let doomed: Vec<EdgeId> = self.edge_ids().filter(|e| !keep.contains(e)).collect();
        for e in doomed {
            g.remove_edge(e).unwrap();
        }
        let isolated: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) == 0).collect();
        for v in isolated {
            g.remove_vertex(v).unwrap();
        }
        g
    }

    /// Sorted degree sequence of live vertices.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Disjoint union; vertices and edges of `other` are renumbered after ours.
    pub fn disjoint_union(&self, other: &MultiGraph) -> MultiGraph {
        let (a, _, _) = self.compact();
        let (b, _, _) = other.compact();
        let mut g = a;
        let offset = g.vertex_bound() as u32;
        for _ in b.vertices() {
            g.add_vertex();
        }
        for (_, u, v) in b.edges() {
            g.add_edge(VertexId(u.0 + offset), VertexId(v.0 + offset)).unwrap();
        }
        g
    }
}

fn remove_one(list: &mut Vec<EdgeId>, e: EdgeId) {
    if let Some(pos) = list.iter().position(|&x| x == e) {
        list.remove(pos);
    }
}

/// A [`MultiGraph`] known to have no loops and no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph(MultiGraph);

impl SimpleGraph {
    pub fn new(g: MultiGraph) -> Result<Self, GraphError> {
        match g.simplicity_violation() {
            None => Ok(SimpleGraph(g)),
            Some(msg) => Err(GraphError::NotSimple(msg)),
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.0
    }

    pub fn into_inner(self) -> MultiGraph {
        self.0
    }
}

impl TryFrom<MultiGraph> for SimpleGraph {
    type Error = GraphError;
    fn try_from(g: MultiGraph) -> Result<Self, GraphError> {
        SimpleGraph::new(g)
    }
}

impl std::ops::Deref for SimpleGraph {
    type Target = MultiGraph;
    fn deref(&self) -> &MultiGraph {
        &self.0
    }
}

/// Standard small graphs.
pub mod named {
    use super::*;

    pub fn complete(n: usize) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(VertexId(i as u32), VertexId(j as u32)).unwrap();
            }
        }
        g.named(format!("K{n}"))
    }

    /// Parts are `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(a + b);
        for i in 0..a {
            for j in 0..b {
                g.add_edge(VertexId(i as u32), VertexId((a + j) as u32)).unwrap();
            }
        }
        g.named(format!("K{a}_{b}"))
    }

    pub fn cycle(n: usize) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n);
        for i in 0..n {
            g.add_edge(VertexId(i as u32), VertexId(((i + 1) % n) as u32)).unwrap();
        }
        g.named(format!("C{n}"))
    }

    pub fn path(n: usize) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n);
        for i in 1..n {
            g.add_edge(VertexId((i - 1) as u32), VertexId(i as u32)).unwrap();
        }
        g.named(format!("P{n}"))
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(leaves + 1);
        for i in 1..=leaves {
            g.add_edge(VertexId(0), VertexId(i as u32)).unwrap();
        }
        g.named(format!("K1_{leaves}"))
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
    pub fn petersen() -> MultiGraph {
        let mut g = MultiGraph::with_vertices(10);
        for i in 0..5u32 {
            g.add_edge(VertexId(i), VertexId((i + 1) % 5)).unwrap();
            g.add_edge(VertexId(5 + i), VertexId(5 + (i + 2) % 5)).unwrap();
            g.add_edge(VertexId(i), VertexId(5 + i)).unwrap();
        }
        g.named("petersen")
    }

    /// The 3-cube on bit strings 0..8.
    pub fn cube() -> MultiGraph {
        let mut g = MultiGraph::with_vertices(8);
        for v in 0..8u32 {
            for bit in 0..3 {
                let w = v ^ (1 << bit);
                if v < w {
                    g.add_edge(VertexId(v), VertexId(w)).unwrap();
                }
            }
        }
        g.named("Q3")
    }
}
