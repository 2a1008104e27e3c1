//! Rotation systems with edge signatures, face tracing and Euler genus.
//!
//! A dart is an edge-end. Each vertex carries a cyclic order of its darts;
//! each edge a signature in {+1, -1}. Faces are traced with a local
//! orientation flag that flips on every negative edge, so non-orientable
//! surfaces are handled by the same procedure.

mod contract;
mod genus;
pub mod io;
mod planarity;

pub use contract::{is_cycle_contractible, is_edge_set_contractible, noncontractible_components, ComponentReport};
pub use genus::{enumerate_embeddings, min_euler_genus, min_euler_genus_with, GenusOptions, GenusResult, DEFAULT_TRACE_BUDGET};
pub use planarity::{is_planar, is_planar_fast, Kuratowski, KuratowskiKind, Planarity};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{is_connected, EdgeId, GraphError, MultiGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: EdgeId,
    /// 0 at the first endpoint of the edge, 1 at the second.
    pub side: u8,
}

impl Dart {
    pub fn new(edge: EdgeId, side: u8) -> Self {
        Dart { edge, side }
    }

    pub fn index(self) -> usize {
        2 * self.edge.index() + self.side as usize
    }

    pub fn from_index(i: usize) -> Self {
        Dart { edge: EdgeId((i / 2) as u32), side: (i % 2) as u8 }
    }

    pub fn other(self) -> Self {
        Dart { edge: self.edge, side: 1 - self.side }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge, self.side)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("malformed rotation system: {0}")]
    Malformed(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge set is not a cycle: {0}")]
    NotACycle(String),
    #[error("edge {0} is not part of the embedded graph")]
    UnknownEdge(EdgeId),
    #[error("genus search space of {space} exceeds the budget of {budget} face traces")]
    Budget { space: u128, budget: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A multigraph with a rotation system and edge signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    graph: MultiGraph,
    rotation: Vec<Vec<Dart>>,
    signature: Vec<i8>,
}

/// The vertex a dart is attached to.
pub fn dart_vertex(g: &MultiGraph, d: Dart) -> VertexId {
    let (u, v) = g.endpoints(d.edge).expect("live edge");
    if d.side == 0 {
        u
    } else {
        v
    }
}

impl EmbeddedGraph {
    /// Validates that every live dart appears exactly once, at its own vertex.
    pub fn new(graph: MultiGraph, rotation: Vec<Vec<Dart>>, signature: Vec<i8>) -> Result<Self, EmbeddingError> {
        let bad = |m: String| Err(EmbeddingError::Malformed(m));
        if rotation.len() != graph.vertex_bound() {
            return bad(format!("{} rotation lists for {} vertex slots", rotation.len(), graph.vertex_bound()));
        }
        if signature.len() != graph.edge_bound() {
            return bad(format!("{} signatures for {} edge slots", signature.len(), graph.edge_bound()));
        }
        let mut seen = vec![false; 2 * graph.edge_bound()];
        for (vi, rot) in rotation.iter().enumerate() {
            let v = VertexId(vi as u32);
            if !graph.has_vertex(v) && !rot.is_empty() {
                return bad(format!("dead vertex {v} has a rotation"));
            }
            for &d in rot {
                if !graph.has_edge_id(d.edge) || d.side > 1 {
                    return bad(format!("dart {d} does not exist"));
                }
                if dart_vertex(&graph, d) != v {
                    return bad(format!("dart {d} listed at {v}"));
                }
                if std::mem::replace(&mut seen[d.index()], true) {
                    return bad(format!("dart {d} listed twice"));
                }
            }
        }
        for (e, _, _) in graph.edges() {
            for side in 0..2 {
                if !seen[Dart::new(e, side).index()] {
                    return bad(format!("dart {} missing", Dart::new(e, side)));
                }
            }
            if !matches!(signature[e.index()], 1 | -1) {
                return bad(format!("edge {e} has signature {}", signature[e.index()]));
            }
        }
        Ok(EmbeddedGraph { graph, rotation, signature })
    }

    /// Orientable embedding from incidence order (the rotation at each vertex is
    /// its incidence list), all signatures +1.
    pub fn from_incidence_order(graph: MultiGraph) -> Self {
        let mut rotation = vec![Vec::new(); graph.vertex_bound()];
        for (e, u, v) in graph.edges() {
            rotation[u.index()].push(Dart::new(e, 0));
            rotation[v.index()].push(Dart::new(e, 1));
        }
        let signature = vec![1; graph.edge_bound()];
        EmbeddedGraph { graph, rotation, signature }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        &self.rotation[v.index()]
    }

    pub fn signature(&self, e: EdgeId) -> i8 {
        self.signature[e.index()]
    }

    pub fn signatures(&self) -> &[i8] {
        &self.signature
    }

    pub fn dart_vertex(&self, d: Dart) -> VertexId {
        dart_vertex(&self.graph, d)
    }

    pub fn set_rotation(&mut self, v: VertexId, rot: Vec<Dart>) -> Result<(), EmbeddingError> {
        let mut a = rot.clone();
        let mut b = self.rotation[v.index()].clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(EmbeddingError::Malformed(format!("new rotation at {v} is not a permutation")));
        }
        self.rotation[v.index()] = rot;
        Ok(())
    }

    pub fn set_signature(&mut self, e: EdgeId, s: i8) {
        assert!(s == 1 || s == -1);
        self.signature[e.index()] = s;
    }

    /// Local switch at `v`: reverse its rotation and negate its non-loop edges.
    /// The surface and the face set are unchanged.
    pub fn switch_vertex(&mut self, v: VertexId) {
        self.rotation[v.index()].reverse();
        for &e in self.graph.incident(v) {
            if !self.graph.is_loop(e) {
                self.signature[e.index()] = -self.signature[e.index()];
            }
        }
    }

    /// Switches vertices so the given forest's edges all have signature +1.
    pub fn normalize_on(&mut self, forest: &[EdgeId]) {
        let keep: BTreeSet<EdgeId> = forest.iter().copied().collect();
        let mut seen = vec![false; self.graph.vertex_bound()];
        for root in self.graph.vertices().collect::<Vec<_>>() {
            if seen[root.index()] {
                continue;
            }
            seen[root.index()] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for e in self.graph.incident(v).to_vec() {
                    if !keep.contains(&e) {
                        continue;
                    }
                    let w = self.graph.opposite(e, v).unwrap();
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        if self.signature[e.index()] < 0 {
                            self.switch_vertex(w);
                        }
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    /// Normalises on a BFS spanning forest.
    pub fn normalize(&mut self) {
        let forest = spanning_forest(&self.graph);
        self.normalize_on(&forest);
    }

    /// A switch labelling making every edge positive, if one exists.
    pub fn orientation_labels(&self) -> Option<Vec<i8>> {
        switch_labels(&self.graph, &self.signature, self.graph.edge_ids())
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_labels().is_some()
    }

    pub(crate) fn successor_tables(&self) -> (Vec<u32>, Vec<u32>) {
        let n = 2 * self.graph.edge_bound();
        let mut succ = vec![u32::MAX; n];
        let mut pred = vec![u32::MAX; n];
        for rot in &self.rotation {
            let k = rot.len();
            for i in 0..k {
                let d = rot[i].index();
                let nx = rot[(i + 1) % k].index();
                succ[d] = nx as u32;
                pred[nx] = d as u32;
            }
        }
        (succ, pred)
    }

    pub(crate) fn trace_states(&self) -> Vec<Vec<(Dart, i8)>> {
        let (succ, pred) = self.successor_tables();
        let darts: Vec<usize> = self
            .graph
            .edge_ids()
            .flat_map(|e| [Dart::new(e, 0).index(), Dart::new(e, 1).index()])
            .collect();
        trace_with(&darts, &succ, &pred, &self.signature)
            .into_iter()
            .map(|f| f.into_iter().map(|(d, s)| (Dart::from_index(d), s)).collect())
            .collect()
    }

    pub fn trace_faces(&self) -> FaceSet {
        let mut faces: Vec<Face> =
            self.trace_states().into_iter().map(|f| Face { darts: f.into_iter().map(|(d, _)| d).collect() }).collect();
        // an isolated vertex bounds one face on its own
        faces.extend(self.graph.vertices().filter(|&v| self.graph.degree(v) == 0).map(|_| Face { darts: Vec::new() }));
        FaceSet { faces, vertices: self.graph.vertex_count(), edges: self.graph.edge_count() }
    }

    /// Euler genus `2 - n + m - f`; the graph must be connected.
    pub fn euler_genus(&self) -> Result<usize, EmbeddingError> {
        if !is_connected(&self.graph) {
            return Err(EmbeddingError::Disconnected);
        }
        let fs = self.trace_faces();
        let chi = fs.euler_characteristic();
        Ok((2 - chi) as usize)
    }

    /// All faces bounded by exactly two edges.
    pub fn two_faces(&self) -> Vec<Face> {
        self.trace_faces().faces.into_iter().filter(|f| f.darts.len() == 2).collect()
    }

    /// The embedding induced on a subset of edges (rotations restricted,
    /// vertices without kept edges dropped).
    pub fn restrict(&self, keep: &BTreeSet<EdgeId>) -> EmbeddedGraph {
        let graph = self.graph.edge_subgraph(keep);
        let rotation = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, rot)| {
                if graph.has_vertex(VertexId(v as u32)) {
                    rot.iter().copied().filter(|d| keep.contains(&d.edge)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        EmbeddedGraph { graph, rotation, signature: self.signature.clone() }
    }

    pub(crate) fn into_parts(self) -> (MultiGraph, Vec<Vec<Dart>>, Vec<i8>) {
        (self.graph, self.rotation, self.signature)
    }
}

/// BFS spanning forest (edges sorted).
pub(crate) fn spanning_forest(g: &MultiGraph) -> Vec<EdgeId> {
    let mut seen = vec![false; g.vertex_bound()];
    let mut out = Vec::new();
    for root in g.vertices() {
        if seen[root.index()] {
            continue;
        }
        seen[root.index()] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                let w = g.opposite(e, v).unwrap();
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    out.push(e);
                    queue.push_back(w);
                }
            }
        }
    }
    out.sort();
    out
}

/// Vertex labels `l` with `sig(e) = l(u) l(v)` on the given edges, if any.
pub(crate) fn switch_labels(g: &MultiGraph, sig: &[i8], edges: impl Iterator<Item = EdgeId>) -> Option<Vec<i8>> {
    let edges: BTreeSet<EdgeId> = edges.collect();
    let mut label = vec![0i8; g.vertex_bound()];
    for root in g.vertices() {
        if label[root.index()] != 0 {
            continue;
        }
        label[root.index()] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                if !edges.contains(&e) {
                    continue;
                }
                let w = g.opposite(e, v).unwrap();
                let want = label[v.index()] * sig[e.index()];
                if label[w.index()] == 0 {
                    label[w.index()] = want;
                    queue.push_back(w);
                } else if label[w.index()] != want {
                    return None;
                }
            }
        }
    }
    Some(label)
}

/// Face orbits over the given darts. States are `(dart, s)` with `s` the
/// local orientation when leaving along the dart; each face is reported once.
pub(crate) fn trace_with(darts: &[usize], succ: &[u32], pred: &[u32], sig: &[i8]) -> Vec<Vec<(usize, i8)>> {
    let mut seen = vec![[false; 2]; succ.len()];
    let slot = |s: i8| if s > 0 { 0 } else { 1 };
    let mut faces = Vec::new();
    for &start in darts {
        for s0 in [1i8, -1] {
            if seen[start][slot(s0)] {
                continue;
            }
            let mut face = Vec::new();
            let (mut d, mut s) = (start, s0);
            loop {
                seen[d][slot(s)] = true;
                let e = d / 2;
                let arrive = d ^ 1;
                let s2 = s * sig[e];
                // the mirror state walks the same face backwards
                seen[arrive][slot(-s2)] = true;
                face.push((d, s));
                d = if s2 > 0 { succ[arrive] as usize } else { pred[arrive] as usize };
                s = s2;
                if d == start && s == s0 {
                    break;
                }
            }
            faces.push(face);
        }
    }
    faces
}

/// Number of faces, without materialising the walks.
pub(crate) fn count_faces(darts: &[usize], succ: &[u32], pred: &[u32], sig: &[i8], seen: &mut [u8]) -> usize {
    seen.iter_mut().for_each(|x| *x = 0);
    let mut faces = 0;
    for &start in darts {
        for (s0, bit) in [(1i8, 1u8), (-1, 2)] {
            if seen[start] & bit != 0 {
                continue;
            }
            faces += 1;
            let (mut d, mut s) = (start, s0);
            loop {
                seen[d] |= if s > 0 { 1 } else { 2 };
                let arrive = d ^ 1;
                let s2 = s * sig[d / 2];
                seen[arrive] |= if s2 > 0 { 2 } else { 1 };
                d = if s2 > 0 { succ[arrive] as usize } else { pred[arrive] as usize };
                s = s2;
                if d == start && s == s0 {
                    break;
                }
            }
        }
    }
    faces
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Darts in walk order; each is traversed away from its own vertex.
    pub darts: Vec<Dart>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        self.darts.iter().map(|d| d.edge).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    pub vertices: usize,
    pub edges: usize,
}

impl FaceSet {
    pub fn count(&self) -> usize {
        self.faces.len()
    }

    /// `n - m + f`, summed over components.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces.len() as i64
    }

    pub fn total_length(&self) -> usize {
        self.faces.iter().map(Face::len).sum()
    }
}


#[cfg(test)]
mod tests {
    use super::tests_support::*;
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn k4_planar_faces() {
        let eg = planar_k4();
        let fs = eg.trace_faces();
        assert_eq!(fs.count(), 4);
        assert_eq!(fs.total_length(), 12);
        assert_eq!(eg.euler_genus().unwrap(), 0);
        assert!(eg.two_faces().is_empty());
    }

    #[test]
    fn projective_plane_loop() {
        let eg = projective_loop();
        assert_eq!(eg.trace_faces().count(), 1);
        assert_eq!(eg.euler_genus().unwrap(), 1);
        assert!(!eg.is_orientable());
    }

    #[test]
    fn planar_triangle() {
        let eg = EmbeddedGraph::from_incidence_order(cycle(3));
        assert_eq!(eg.trace_faces().count(), 2);
        assert!(eg.two_faces().is_empty());
    }

    #[test]
    fn digon_faces() {
        let eg = EmbeddedGraph::from_incidence_order(MultiGraph::from_edges(2, &[(0, 1), (0, 1)]));
        assert_eq!(eg.two_faces().len(), 2);
    }

    #[test]
    fn malformed_rotations_rejected() {
        let g = cycle(3);
        let rot = vec![vec![Dart::new(EdgeId(0), 0)], vec![], vec![]];
        assert!(matches!(EmbeddedGraph::new(g.clone(), rot, vec![1; 3]), Err(EmbeddingError::Malformed(_))));
        let eg = EmbeddedGraph::from_incidence_order(g.clone());
        let (gg, rot, _) = eg.into_parts();
        assert!(EmbeddedGraph::new(gg, rot, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn disconnected_genus_refused() {
        let eg = EmbeddedGraph::from_incidence_order(MultiGraph::with_vertices(2));
        assert_eq!(eg.euler_genus(), Err(EmbeddingError::Disconnected));
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;
        use crate::embedding::tests_support::random_embedding;

        fn connected_graph() -> impl Strategy<Value = MultiGraph> {
            (2usize..8, proptest::collection::vec((0u32..8, 0u32..8), 0..14)).prop_map(|(n, extra)| {
                let mut g = path(n);
                for (a, b) in extra {
                    g.add_edge(VertexId(a % n as u32), VertexId(b % n as u32)).unwrap();
                }
                g
            })
        }

        proptest! {
            #[test]
            fn euler_identity(g in connected_graph(), seed in any::<u64>()) {
                let eg = random_embedding(g, seed);
                let fs = eg.trace_faces();
                prop_assert_eq!(fs.total_length(), 2 * eg.graph.edge_count());
                let chi = fs.euler_characteristic();
                prop_assert!(chi <= 2);
                let genus = eg.euler_genus().unwrap() as i64;
                prop_assert_eq!(chi, 2 - genus);
                if eg.is_orientable() {
                    prop_assert_eq!(genus % 2, 0);
                }
            }

            #[test]
            fn switching_preserves_faces(g in connected_graph(), seed in any::<u64>(), which in any::<u32>()) {
                let mut eg = random_embedding(g, seed);
                let before = eg.trace_faces().count();
                let orientable = eg.is_orientable();
                let v = VertexId(which % eg.graph.vertex_count() as u32);
                eg.switch_vertex(v);
                prop_assert_eq!(eg.trace_faces().count(), before);
                eg.normalize();
                prop_assert_eq!(eg.trace_faces().count(), before);
                prop_assert_eq!(eg.is_orientable(), orientable);
                for e in spanning_forest(&eg.graph) {
                    prop_assert_eq!(eg.signature(e), 1);
                }
            }
        }
    }
}
