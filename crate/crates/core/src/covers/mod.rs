//! Covering maps between multigraphs.
//!
//! A cover is checked at the level of darts: every cover vertex must see
//! each dart of its image vertex exactly once. For simple graphs this is the
//! usual neighbourhood bijection; with loops and parallel edges it is the
//! right notion, and it is what keeps contraction lifts closed.

mod double;
pub mod io;
mod lift_ops;
mod voltage;

pub use double::{orientation_double_cover, DoubleCover};
pub use lift_ops::{cover_add_triangle_edge, cover_contract_edge, cover_delete_edge, cover_delete_vertex};
pub use voltage::{cotree_edges, derived_cover, is_transitive, permutation_from_index, VoltageAssignment};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::embedding::EmbeddingError;
use crate::graph::{EdgeId, GraphError, MultiGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("base vertex {0} has an empty fibre (map is not surjective)")]
    NotSurjective(VertexId),
    #[error("cover vertex {vertex} is not a local bijection: {detail}")]
    LocalBijection { vertex: VertexId, detail: String },
    #[error("fibre over {vertex} has {size} vertices, expected {expected}")]
    FiberMismatch { vertex: VertexId, size: usize, expected: usize },
    #[error("malformed cover map: {0}")]
    Malformed(String),
    #[error("operation not applicable: {0}")]
    Precondition(String),
    #[error("invalid voltage: {0}")]
    Voltage(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// A map from a cover graph onto a base graph, on vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMap {
    pub base: MultiGraph,
    pub cover: MultiGraph,
    /// Indexed by cover vertex id; `None` for dead slots.
    pub vmap: Vec<Option<VertexId>>,
    /// Indexed by cover edge id; `None` for dead slots.
    pub emap: Vec<Option<EdgeId>>,
}

impl CoverMap {
    pub fn new(base: MultiGraph, cover: MultiGraph, vmap: Vec<Option<VertexId>>, emap: Vec<Option<EdgeId>>) -> Self {
        CoverMap { base, cover, vmap, emap }
    }

    /// Derives the edge map from the vertex map. Every cover edge must have
    /// exactly one base edge between the images of its ends.
    pub fn from_vertex_map(base: MultiGraph, cover: MultiGraph, vmap: Vec<Option<VertexId>>) -> Result<Self, CoverError> {
        let mut emap = vec![None; cover.edge_bound()];
        for (e, x, y) in cover.edges() {
            let img = |w: VertexId| {
                vmap.get(w.index())
                    .copied()
                    .flatten()
                    .ok_or_else(|| CoverError::Malformed(format!("cover vertex {w} has no image")))
            };
            let (a, b) = (img(x)?, img(y)?);
            let between = base.edges_between(a, b);
            match between.as_slice() {
                [f] => emap[e.index()] = Some(*f),
                [] => return Err(CoverError::LocalBijection { vertex: x, detail: format!("edge {e} maps onto the non-edge {a}-{b}") }),
                _ => return Err(CoverError::Malformed(format!("edge {e} has several candidate images between {a} and {b}"))),
            }
        }
        Ok(CoverMap { base, cover, vmap, emap })
    }

    /// The identity cover of a graph.
    pub fn identity(g: &MultiGraph) -> Self {
        let vmap = (0..g.vertex_bound()).map(|i| g.has_vertex(VertexId(i as u32)).then_some(VertexId(i as u32))).collect();
        let emap = (0..g.edge_bound()).map(|i| g.has_edge_id(EdgeId(i as u32)).then_some(EdgeId(i as u32))).collect();
        CoverMap { base: g.clone(), cover: g.clone(), vmap, emap }
    }

    pub fn image(&self, w: VertexId) -> Option<VertexId> {
        self.vmap.get(w.index()).copied().flatten()
    }

    pub fn edge_image(&self, e: EdgeId) -> Option<EdgeId> {
        self.emap.get(e.index()).copied().flatten()
    }

    pub fn fiber(&self, v: VertexId) -> Vec<VertexId> {
        self.cover.vertices().filter(|&w| self.image(w) == Some(v)).collect()
    }

    pub fn edge_fiber(&self, e: EdgeId) -> Vec<EdgeId> {
        self.cover.edge_ids().filter(|&f| self.edge_image(f) == Some(e)).collect()
    }

    /// Base dart (edge, side) that a cover dart projects to, if consistent.
    fn project_dart(&self, f: EdgeId, side: u8) -> Option<(EdgeId, u8)> {
        let e = self.edge_image(f)?;
        let (x, y) = self.cover.endpoints(f)?;
        let (a, b) = self.base.endpoints(e)?;
        let (ix, iy) = (self.image(x)?, self.image(y)?);
        if (ix, iy) == (a, b) {
            Some((e, side))
        } else if (ix, iy) == (b, a) {
            Some((e, 1 - side))
        } else {
            None
        }
    }
}

/// Checks surjectivity, the local bijection at every cover vertex and equal
/// fibre sizes. Returns the ply.
pub fn verify_cover(c: &CoverMap) -> Result<usize, CoverError> {
    if c.vmap.len() != c.cover.vertex_bound() || c.emap.len() != c.cover.edge_bound() {
        return Err(CoverError::Malformed("map length does not match the cover".into()));
    }
    let mut fibers: BTreeMap<VertexId, usize> = c.base.vertices().map(|v| (v, 0)).collect();
    for w in c.cover.vertices() {
        let v = c.image(w).ok_or_else(|| CoverError::Malformed(format!("cover vertex {w} has no image")))?;
        *fibers.get_mut(&v).ok_or_else(|| CoverError::Malformed(format!("cover vertex {w} maps to dead vertex {v}")))? +=
            1;
    }
    for f in c.cover.edge_ids() {
        let e = c.edge_image(f).ok_or_else(|| CoverError::Malformed(format!("cover edge {f} has no image")))?;
        if !c.base.has_edge_id(e) {
            return Err(CoverError::Malformed(format!("cover edge {f} maps to dead edge {e}")));
        }
    }
    if let Some((&v, _)) = fibers.iter().find(|(_, &n)| n == 0) {
        return Err(CoverError::NotSurjective(v));
    }
    for w in c.cover.vertices() {
        let v = c.image(w).unwrap();
        let mut want: BTreeMap<(EdgeId, u8), usize> = BTreeMap::new();
        for &e in c.base.incident(v) {
            let (a, b) = c.base.endpoints(e).unwrap();
            if a == v {
                want.insert((e, 0), 1);
            }
            if b == v {
                want.insert((e, 1), 1);
            }
        }
        // a loop's incidence is listed twice
        let mut seen_loops = BTreeSet::new();
        let mut have: BTreeMap<(EdgeId, u8), usize> = BTreeMap::new();
        for &f in c.cover.incident(w) {
            let (x, y) = c.cover.endpoints(f).unwrap();
            let sides: Vec<u8> = if x == y {
                if !seen_loops.insert(f) {
                    continue;
                }
                vec![0, 1]
            } else {
                vec![if x == w { 0 } else { 1 }]
            };
            for s in sides {
                let d = c.project_dart(f, s).ok_or_else(|| CoverError::LocalBijection {
                    vertex: w,
                    detail: format!("edge {f} does not lie over its image edge"),
                })?;
                *have.entry(d).or_default() += 1;
            }
        }
        if have != want {
            let detail = describe_mismatch(&want, &have);
            return Err(CoverError::LocalBijection { vertex: w, detail });
        }
    }
    let expected = *fibers.values().next().unwrap_or(&0);
    if let Some((&v, &size)) = fibers.iter().find(|(_, &n)| n != expected) {
        return Err(CoverError::FiberMismatch { vertex: v, size, expected });
    }
    Ok(expected)
}

fn describe_mismatch(want: &BTreeMap<(EdgeId, u8), usize>, have: &BTreeMap<(EdgeId, u8), usize>) -> String {
    for (d, &n) in want {
        let h = have.get(d).copied().unwrap_or(0);
        if h != n {
            return format!("base dart {}.{} covered {h} times", d.0, d.1);
        }
    }
    let (d, n) = have.iter().find(|(d, _)| !want.contains_key(d)).unwrap();
    format!("base dart {}.{} covered {n} times but not incident", d.0, d.1)
}

/// Preimage of a base subgraph: the cover vertices over `vertices` and the
/// cover edges over `edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Lift {
    /// The lift as a subgraph of the cover, keeping cover identifiers.
    pub fn subgraph(&self, cover: &MultiGraph) -> MultiGraph {
        let mut g = cover.induced(&self.vertices);
        for e in cover.edge_ids() {
            if !self.edges.contains(&e) && g.has_edge_id(e) {
                g.remove_edge(e).unwrap();
            }
        }
        g
    }
}

/// Lift of the subgraph with the given vertices and edges; the endpoints of
/// `edges` are added to the vertex set.
pub fn lift_subgraph(c: &CoverMap, vertices: &BTreeSet<VertexId>, edges: &BTreeSet<EdgeId>) -> Result<Lift, CoverError> {
    let mut vs = vertices.clone();
    for &e in edges {
        let (a, b) = c.base.check_edge(e)?;
        vs.insert(a);
        vs.insert(b);
    }
    for &v in &vs {
        c.base.check_vertex(v)?;
    }
    let lv = c.cover.vertices().filter(|&w| c.image(w).is_some_and(|v| vs.contains(&v))).collect();
    let le = c.cover.edge_ids().filter(|&f| c.edge_image(f).is_some_and(|e| edges.contains(&e))).collect();
    Ok(Lift { vertices: lv, edges: le })
}
