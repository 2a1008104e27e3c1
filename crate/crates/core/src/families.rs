//! Sum-Kuratowski graphs: copies of K5 or K3,3 glued at joining vertices.
//!
//! Numbering is canonical: joining vertices come first, then the remaining
//! vertices of each copy in copy order. K3,3 copies are labelled
//! `a1 a2 a3 b1 b2 b3` (local 0..6) with parts `{a*}` and `{b*}`; the
//! joining vertices always use `a1`, `a2` or `b1`, never `a3`/`b3`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{connected_components, MultiGraph, VertexId};
use crate::minors::{YCertificate, YOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Lambda1,
    Lambda2,
    Omega1,
    Omega2,
    Theta1,
    Theta2,
    Theta3,
    Pi1,
    Pi2,
    Pi3,
    K3k,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Lambda1,
        Family::Lambda2,
        Family::Omega1,
        Family::Omega2,
        Family::Theta1,
        Family::Theta2,
        Family::Theta3,
        Family::Pi1,
        Family::Pi2,
        Family::Pi3,
        Family::K3k,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Lambda1 => "lambda1",
            Family::Lambda2 => "lambda2",
            Family::Omega1 => "omega1",
            Family::Omega2 => "omega2",
            Family::Theta1 => "theta1",
            Family::Theta2 => "theta2",
            Family::Theta3 => "theta3",
            Family::Pi1 => "pi1",
            Family::Pi2 => "pi2",
            Family::Pi3 => "pi3",
            Family::K3k => "k3",
        }
    }

    pub fn copy_kind(self) -> Option<CopyKind> {
        use Family::*;
        match self {
            Lambda1 | Omega1 | Theta1 | Pi1 => Some(CopyKind::K5),
            Lambda2 | Omega2 | Theta2 | Theta3 | Pi2 | Pi3 => Some(CopyKind::K33),
            K3k => None,
        }
    }

    /// The K5-based family a K3,3-based one reduces to.
    pub fn k5_form(self) -> Option<Family> {
        use Family::*;
        match self {
            Omega2 => Some(Omega1),
            Theta2 | Theta3 => Some(Theta1),
            Pi2 | Pi3 => Some(Pi1),
            _ => None,
        }
    }

    pub fn is_path_family(self) -> bool {
        matches!(self, Family::Pi1 | Family::Pi2 | Family::Pi3)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyKind {
    K5,
    K33,
}

impl CopyKind {
    pub fn size(self) -> usize {
        match self {
            CopyKind::K5 => 5,
            CopyKind::K33 => 6,
        }
    }

    /// Edges between local labels.
    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            CopyKind::K5 => (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect(),
            CopyKind::K33 => (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("infinite families are only available as finite truncations")]
    Infinite,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("malformed family spec `{0}` (expected e.g. `omega1:3`)")]
    Malformed(String),
    #[error("{0} is not built from K3,3 copies")]
    NotReducible(Family),
    #[error("copy {copy}: vertex {vertex} ({label}) must be a non-joining degree-3 vertex")]
    Mislabeled { copy: usize, vertex: VertexId, label: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub k: usize,
}

impl FamilySpec {
    pub fn new(family: Family, k: usize) -> Self {
        FamilySpec { family, k }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.k)
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .or_else(|| (s == "k3k").then_some(Family::K3k))
            .ok_or(FamilyError::UnknownFamily(s))
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, k) = s.split_once(':').ok_or_else(|| FamilyError::Malformed(s.into()))?;
        let family: Family = name.trim().parse()?;
        let k = k.trim();
        if matches!(k.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Err(FamilyError::Infinite);
        }
        let k: usize = k.parse().map_err(|_| FamilyError::Malformed(s.into()))?;
        if k == 0 {
            return Err(FamilyError::ZeroK);
        }
        Ok(FamilySpec { family, k })
    }
}

/// A generated family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub spec: FamilySpec,
    pub graph: MultiGraph,
    /// Joining vertices; for path families in path order.
    pub joining: Vec<VertexId>,
    /// Components left after deleting the joining vertices, each sorted.
    pub hanging: Vec<Vec<VertexId>>,
    /// Per copy, the global id of each local label (empty for K3,k).
    pub copies: Vec<Vec<VertexId>>,
}

impl FamilyInstance {
    pub fn kind(&self) -> Option<CopyKind> {
        self.spec.family.copy_kind()
    }

    /// Annotation lines for the text format.
    pub fn annotations(&self) -> Vec<String> {
        let list = |vs: &[VertexId]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = vec![format!("family: {}", self.spec), format!("joining: {}", list(&self.joining))];
        for h in &self.hanging {
            out.push(format!("hanging: {}", list(h)));
        }
        out
    }
}

/// Which local labels of copy `i` are identified with which joining index.
fn identifications(family: Family, i: usize) -> Vec<(usize, usize)> {
    use Family::*;
    match family {
        Lambda1 | Lambda2 | K3k => vec![],
        Omega1 | Omega2 => vec![(0, 0)],
        Theta1 => vec![(0, 0), (1, 1)],
        Theta2 => vec![(0, 0), (3, 1)],
        Theta3 => vec![(0, 0), (1, 1)],
        Pi1 | Pi3 => vec![(0, i), (1, i + 1)],
        Pi2 => vec![(0, i), (3, i + 1)],
    }
}

fn joining_count(family: Family, k: usize) -> usize {
    use Family::*;
    match family {
        Lambda1 | Lambda2 => 0,
        Omega1 | Omega2 => 1,
        Theta1 | Theta2 | Theta3 => 2,
        Pi1 | Pi2 | Pi3 => k + 1,
        K3k => 3,
    }
}

pub fn generate(spec: &FamilySpec) -> Result<FamilyInstance, FamilyError> {
    let FamilySpec { family, k } = *spec;
    if k == 0 {
        return Err(FamilyError::ZeroK);
    }
    let nj = joining_count(family, k);
    let mut g = MultiGraph::with_vertices(nj).named(spec.to_string().replace(':', "_"));
    let joining: Vec<VertexId> = (0..nj as u32).map(VertexId).collect();
    let mut copies = Vec::new();

    match family.copy_kind() {
        None => {
            for _ in 0..k {
                let h = g.add_vertex();
                for &j in &joining {
                    g.add_edge(j, h).unwrap();
                }
            }
        }
        Some(kind) => {
            for i in 0..k {
                let ident = identifications(family, i);
                let local: Vec<VertexId> = (0..kind.size())
                    .map(|l| match ident.iter().find(|&&(ll, _)| ll == l) {
                        Some(&(_, j)) => joining[j],
                        None => g.add_vertex(),
                    })
                    .collect();
                for (a, b) in kind.edges() {
                    if !g.has_edge(local[a], local[b]) {
                        g.add_edge(local[a], local[b]).unwrap();
                    }
                }
                copies.push(local);
            }
        }
    }
    let hanging = hanging_components(&g, &joining);
    Ok(FamilyInstance { spec: *spec, graph: g, joining, hanging, copies })
}

/// Components of `g` minus `joining`, recomputed from scratch.
pub fn hanging_components(g: &MultiGraph, joining: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut rest = g.clone();
    for &j in joining {
        rest.remove_vertex(j).unwrap();
    }
    connected_components(&rest)
}

/// Result of replacing every K3,3 copy by a K5 on the same joining vertices.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// The reduced graph, compacted. Joining vertices keep their ids.
    pub reduced: FamilyInstance,
    /// Operations on the original graph's identifiers.
    pub certificate: YCertificate,
    /// Explicit isomorphism from the reduced graph onto the generated K5-form
    /// instance, as `(reduced vertex, target vertex)` pairs.
    pub isomorphism: Vec<(VertexId, VertexId)>,
}

/// Turns a K3,3-based family member into its K5-based counterpart by the
/// Y-minor moves: add `a1a2` (through `b3`), `b1b2`, `b2b3`, `b1b3` (through
/// `a3`), then delete `a3`.
pub fn reduce_to_k5_form(inst: &FamilyInstance) -> Result<Reduction, FamilyError> {
    let family = inst.spec.family;
    let target_family = family.k5_form().ok_or(FamilyError::NotReducible(family))?;
    let joining: BTreeSet<VertexId> = inst.joining.iter().copied().collect();
    let mut g = inst.graph.clone();
    let mut ops = Vec::new();

    for (ci, copy) in inst.copies.iter().enumerate() {
        let [a1, a2, a3, b1, b2, b3] = copy[..] else {
            return Err(FamilyError::NotReducible(family));
        };
        for (v, label) in [(a3, "a3"), (b3, "b3")] {
            if joining.contains(&v) || g.degree(v) != 3 {
                return Err(FamilyError::Mislabeled { copy: ci, vertex: v, label });
            }
        }
        for (v, a, b) in [(b3, a1, a2), (a3, b1, b2), (a3, b2, b3), (a3, b1, b3)] {
            debug_assert_eq!(g.degree(v), 3);
            // shared joining pairs (theta3) already carry the edge from an earlier copy
            if g.has_edge(a, b) {
                continue;
            }
            g.add_edge(a, b).unwrap();
            ops.push(YOp::AddEdge { v, a, b });
        }
        g.remove_vertex(a3).unwrap();
        ops.push(YOp::DeleteVertex(a3));
    }

    let (compact, vmap, _) = g.compact();
    let remap = |v: VertexId| vmap[v.index()].expect("surviving vertex");
    let target = generate(&FamilySpec::new(target_family, inst.spec.k))?;

    // copy-local correspondence: joined labels first, then the rest in label order
    let mut iso = vec![None; compact.vertex_bound()];
    for &j in &inst.joining {
        iso[remap(j).index()] = Some(j);
    }
    for (ci, copy) in inst.copies.iter().enumerate() {
        let survivors: Vec<VertexId> = [copy[0], copy[1], copy[3], copy[4], copy[5]].to_vec();
        let ident = identifications(family, ci);
        let mut order: Vec<VertexId> = ident.iter().map(|&(l, _)| copy[l]).collect();
        order.extend(survivors.iter().filter(|v| !order.contains(v)).copied().collect::<Vec<_>>());
        let tcopy = &target.copies[ci];
        let tident = identifications(target_family, ci);
        let mut torder: Vec<VertexId> = tident.iter().map(|&(l, _)| tcopy[l]).collect();
        torder.extend(tcopy.iter().filter(|v| !torder.contains(v)).copied().collect::<Vec<_>>());
        for (s, t) in order.into_iter().zip(torder) {
            iso[remap(s).index()] = Some(t);
        }
    }
    let isomorphism: Vec<(VertexId, VertexId)> =
        compact.vertices().map(|v| (v, iso[v.index()].expect("every vertex mapped"))).collect();

    let mut reduced_graph = compact;
    reduced_graph.set_name(format!("{}_reduced", inst.graph.name().unwrap_or("h")));
    let joining: Vec<VertexId> = inst.joining.iter().map(|&j| remap(j)).collect();
    let copies = inst
        .copies
        .iter()
        .map(|c| [c[0], c[1], c[3], c[4], c[5]].iter().map(|&v| remap(v)).collect())
        .collect();
    let hanging = hanging_components(&reduced_graph, &joining);
    Ok(Reduction {
        reduced: FamilyInstance {
            spec: FamilySpec::new(target_family, inst.spec.k),
            graph: reduced_graph,
            joining,
            hanging,
            copies,
        },
        certificate: YCertificate { ops },
        isomorphism,
    })
}

/// Checks that `map` is an adjacency-preserving bijection between two simple graphs.
pub fn is_graph_isomorphism(g1: &MultiGraph, g2: &MultiGraph, map: &[(VertexId, VertexId)]) -> bool {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() || map.len() != g1.vertex_count() {
        return false;
    }
    let mut fwd = vec![None; g1.vertex_bound()];
    let mut hit = BTreeSet::new();
    for &(a, b) in map {
        if !g1.has_vertex(a) || !g2.has_vertex(b) || fwd[a.index()].is_some() || !hit.insert(b) {
            return false;
        }
        fwd[a.index()] = Some(b);
    }
    g1.edges().all(|(_, u, v)| g2.has_edge(fwd[u.index()].unwrap(), fwd[v.index()].unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    fn inst(f: Family, k: usize) -> FamilyInstance {
        generate(&FamilySpec::new(f, k)).unwrap()
    }

    #[test]
    fn vertex_counts() {
        for k in 1..6 {
            let expect = [
                (Family::Omega1, 4 * k + 1),
                (Family::Theta1, 3 * k + 2),
                (Family::Pi1, 4 * k + 1),
                (Family::K3k, k + 3),
                (Family::Omega2, 5 * k + 1),
                (Family::Theta2, 4 * k + 2),
                (Family::Theta3, 4 * k + 2),
                (Family::Pi2, 5 * k + 1),
                (Family::Pi3, 5 * k + 1),
                (Family::Lambda1, 5 * k),
                (Family::Lambda2, 6 * k),
            ];
            for (f, n) in expect {
                let i = inst(f, k);
                assert_eq!(i.graph.vertex_count(), n, "{f} k={k}");
                assert!(i.graph.is_simple());
            }
        }
    }

    #[test]
    fn edge_counts() {
        for k in 1..6 {
            assert_eq!(inst(Family::Omega1, k).graph.edge_count(), 10 * k);
            assert_eq!(inst(Family::Theta1, k).graph.edge_count(), 10 * k - (k - 1));
            assert_eq!(inst(Family::Theta2, k).graph.edge_count(), 8 * k + 1);
            assert_eq!(inst(Family::Theta3, k).graph.edge_count(), 9 * k);
            assert_eq!(inst(Family::Pi1, k).graph.edge_count(), 10 * k);
            assert_eq!(inst(Family::K3k, k).graph.edge_count(), 3 * k);
        }
    }

    #[test]
    fn omega13() {
        let i = inst(Family::Omega1, 3);
        assert_eq!((i.graph.vertex_count(), i.graph.edge_count()), (13, 30));
        assert_eq!(i.joining.len(), 1);
        assert_eq!(i.hanging.len(), 3);
        for h in &i.hanging {
            let sub = i.graph.induced(&h.iter().copied().collect());
            assert!(is_isomorphic(&sub.compact().0, &crate::graph::named::complete(4)).unwrap().is_some());
        }
    }

    #[test]
    fn theta13_hanging_triangles() {
        let i = inst(Family::Theta1, 3);
        assert_eq!(i.graph.vertex_count(), 11);
        assert_eq!(i.joining.len(), 2);
        assert!(i.graph.has_edge(i.joining[0], i.joining[1]));
        assert_eq!(i.hanging.len(), 3);
        for h in &i.hanging {
            assert_eq!(h.len(), 3);
            assert_eq!(i.graph.induced(&h.iter().copied().collect()).edge_count(), 3);
        }
    }

    #[test]
    fn pi14_joining_path() {
        let i = inst(Family::Pi1, 4);
        assert_eq!(i.graph.vertex_count(), 17);
        assert_eq!(i.joining.len(), 5);
        for w in i.joining.windows(2) {
            assert!(i.graph.has_edge(w[0], w[1]));
        }
    }

    #[test]
    fn adjacency_of_identified_pairs() {
        let t2 = inst(Family::Theta2, 2);
        assert!(t2.graph.has_edge(t2.joining[0], t2.joining[1]));
        let t3 = inst(Family::Theta3, 2);
        assert!(!t3.graph.has_edge(t3.joining[0], t3.joining[1]));
        let p3 = inst(Family::Pi3, 3);
        assert!(p3.joining.windows(2).all(|w| !p3.graph.has_edge(w[0], w[1])));
    }

    #[test]
    fn parse_specs() {
        assert_eq!("omega1:3".parse::<FamilySpec>().unwrap(), FamilySpec::new(Family::Omega1, 3));
        assert_eq!("pi3:4".parse::<FamilySpec>().unwrap(), FamilySpec::new(Family::Pi3, 4));
        assert_eq!("k3:7".parse::<FamilySpec>().unwrap(), FamilySpec::new(Family::K3k, 7));
        assert_eq!("omega1:inf".parse::<FamilySpec>(), Err(FamilyError::Infinite));
        assert_eq!("omega1:0".parse::<FamilySpec>(), Err(FamilyError::ZeroK));
        assert!("sigma:2".parse::<FamilySpec>().is_err());
        assert_eq!(generate(&FamilySpec::new(Family::Pi1, 0)), Err(FamilyError::ZeroK));
    }

    #[test]
    fn reductions_match_k5_forms() {
        for f in [Family::Omega2, Family::Theta2, Family::Theta3, Family::Pi2, Family::Pi3] {
            for k in 1..5 {
                let i = inst(f, k);
                let r = reduce_to_k5_form(&i).unwrap();
                let target = inst(f.k5_form().unwrap(), k);
                assert!(is_graph_isomorphism(&r.reduced.graph, &target.graph, &r.isomorphism), "{f} k={k}");
                assert_eq!(r.reduced.joining, target.joining);
                for &(s, t) in &r.isomorphism {
                    if r.reduced.joining.contains(&s) {
                        assert_eq!(s, t);
                    }
                }
            }
        }
    }

    #[test]
    fn omega22_certificate_shape() {
        let r = reduce_to_k5_form(&inst(Family::Omega2, 2)).unwrap();
        let adds = r.certificate.ops.iter().filter(|o| matches!(o, YOp::AddEdge { .. })).count();
        let dels = r.certificate.ops.iter().filter(|o| matches!(o, YOp::DeleteVertex(_))).count();
        assert_eq!((adds, dels), (8, 2));
    }

    #[test]
    fn k5_families_not_reducible() {
        assert_eq!(reduce_to_k5_form(&inst(Family::Omega1, 2)).unwrap_err(), FamilyError::NotReducible(Family::Omega1));
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn hanging_matches_recomputation(fi in 0usize..11, k in 1usize..8) {
                let i = inst(Family::ALL[fi], k);
                prop_assert_eq!(hanging_components(&i.graph, &i.joining), i.hanging.clone());
                prop_assert!(i.graph.is_simple());
                if let Some(kind) = i.kind() {
                    prop_assert_eq!(i.copies.len(), k);
                    prop_assert!(i.copies.iter().all(|c| c.len() == kind.size()));
                }
            }
        }
    }
}
