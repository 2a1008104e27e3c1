use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::{tree_path_or_subtree, MinorError, MinorWitness, TreeOutcome};
use crate::families::{generate, CopyKind, Family, FamilyInstance, FamilySpec};
use crate::graph::{is_connected, MultiGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("host graph is not connected")]
    Disconnected,
    #[error("need at least 9k^2 = {need} copies, got {have}")]
    TooFewCopies { have: usize, need: usize },
    #[error("copies {0} and {1} share a vertex")]
    Overlap(usize, usize),
    #[error("copy {0} is neither a K5 nor a K3,3")]
    NotKuratowski(usize),
    #[error("copies mix K5 and K3,3")]
    MixedTypes,
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Witness(#[from] MinorError),
}

#[derive(Clone, Debug)]
pub struct Extraction {
    /// Generated pattern; `witness` maps its vertices to host branch sets.
    pub pattern: FamilyInstance,
    pub witness: MinorWitness,
    /// Copies where the path had to be rerouted inside the copy.
    pub notes: Vec<String>,
}

/// A Kuratowski copy with a labelling: K5 uses five vertices in any order;
/// K3,3 stores `(side a, side b)`.
#[derive(Clone, Debug)]
enum Copy {
    K5(Vec<VertexId>),
    K33([VertexId; 3], [VertexId; 3]),
}

impl Copy {
    fn classify(g: &MultiGraph, vs: &[VertexId]) -> Option<Copy> {
        let set: BTreeSet<VertexId> = vs.iter().copied().collect();
        if set.len() != vs.len() || vs.iter().any(|v| !g.has_vertex(*v)) {
            return None;
        }
        match vs.len() {
            5 => vs
                .iter()
                .enumerate()
                .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
                .then(|| Copy::K5(vs.to_vec())),
            6 => {
                // sides: vs[0] plus the two others not adjacent to it... try all 3-subsets containing vs[0]
                for i in 1..6 {
                    for j in i + 1..6 {
                        let a = [vs[0], vs[i], vs[j]];
                        let b: Vec<VertexId> = vs.iter().copied().filter(|v| !a.contains(v)).collect();
                        if a.iter().all(|&x| b.iter().all(|&y| g.has_edge(x, y))) {
                            return Some(Copy::K33(a, [b[0], b[1], b[2]]));
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }

    fn kind(&self) -> CopyKind {
        match self {
            Copy::K5(_) => CopyKind::K5,
            Copy::K33(..) => CopyKind::K33,
        }
    }

    fn adjacent(&self, x: VertexId, y: VertexId) -> bool {
        match self {
            Copy::K5(_) => x != y,
            Copy::K33(a, _) => a.contains(&x) != a.contains(&y),
        }
    }

    /// Local labels in family order with `first` (and `second`) pinned.
    /// K3,3 order is a1 a2 a3 b1 b2 b3.
    fn labelled(&self, first: VertexId, second: Option<(VertexId, usize)>) -> Vec<VertexId> {
        match self {
            Copy::K5(vs) => {
                let mut out = vec![first];
                if let Some((s, _)) = second {
                    out.push(s);
                }
                out.extend(vs.iter().copied().filter(|v| !out.contains(v)).collect::<Vec<_>>());
                out
            }
            Copy::K33(a, b) => {
                let (mine, other) = if a.contains(&first) { (a, b) } else { (b, a) };
                let mut side_a: Vec<VertexId> = vec![first];
                let mut side_b: Vec<VertexId> = Vec::new();
                match second {
                    // pinned to a2
                    Some((s, 1)) => side_a.push(s),
                    // pinned to b1
                    Some((s, 3)) => side_b.push(s),
                    _ => {}
                }
                side_a.extend(mine.iter().copied().filter(|v| !side_a.contains(v)).collect::<Vec<_>>());
                side_b.extend(other.iter().copied().filter(|v| !side_b.contains(v)).collect::<Vec<_>>());
                side_a.into_iter().chain(side_b).collect()
            }
        }
    }
}

/// From at least `9k^2` disjoint Kuratowski subgraphs of a connected graph,
/// builds a minor model of one of Ω1,k, Ω2,k, Π1,k, Π2,k or Π3,k.
///
/// Each copy is contracted to a single vertex, a spanning tree of the
/// quotient is searched for a subtree with `3k` copy leaves (giving an Ω
/// model by contracting the tree) or a path through `3k` copies; in the
/// latter case the copies are grouped by how the lifted path crosses them.
pub fn extract_family_minor(g: &MultiGraph, copies: &[Vec<VertexId>], k: usize) -> Result<Extraction, ExtractError> {
    if k == 0 {
        return Err(ExtractError::ZeroK);
    }
    if !is_connected(g) {
        return Err(ExtractError::Disconnected);
    }
    if copies.len() < 9 * k * k {
        return Err(ExtractError::TooFewCopies { have: copies.len(), need: 9 * k * k });
    }
    let mut class: Vec<Option<usize>> = vec![None; g.vertex_bound()];
    let mut typed = Vec::with_capacity(copies.len());
    for (i, c) in copies.iter().enumerate() {
        let cp = Copy::classify(g, c).ok_or(ExtractError::NotKuratowski(i))?;
        for &v in c {
            if let Some(j) = class[v.index()] {
                return Err(ExtractError::Overlap(j, i));
            }
            class[v.index()] = Some(i);
        }
        typed.push(cp);
    }
    let kind = typed[0].kind();
    if typed.iter().any(|c| c.kind() != kind) {
        return Err(ExtractError::MixedTypes);
    }

    // quotient: copies become nodes 0..c, other vertices follow
    let nc = copies.len();
    let mut node_of = vec![usize::MAX; g.vertex_bound()];
    let mut members: Vec<Vec<VertexId>> = copies.to_vec();
    for v in g.vertices() {
        node_of[v.index()] = match class[v.index()] {
            Some(i) => i,
            None => {
                members.push(vec![v]);
                members.len() - 1
            }
        };
    }
    let nodes = members.len();
    // BFS spanning tree of the quotient, remembering one host edge per tree edge
    let mut tree = MultiGraph::with_vertices(nodes);
    let mut link: BTreeMap<(usize, usize), (VertexId, VertexId)> = BTreeMap::new();
    let mut seen = vec![false; nodes];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &hx in &members[x] {
            for hy in g.neighbors(hx) {
                let y = node_of[hy.index()];
                if !seen[y] {
                    seen[y] = true;
                    tree.add_edge(VertexId(x as u32), VertexId(y as u32)).unwrap();
                    link.insert((x, y), (hx, hy));
                    link.insert((y, x), (hy, hx));
                    queue.push_back(y);
                }
            }
        }
    }
    let marked: BTreeSet<VertexId> = (0..nc as u32).map(VertexId).collect();
    let outcome = tree_path_or_subtree(&tree, &marked, 3 * k).expect("preconditions checked");

    match outcome {
        TreeOutcome::Subtree { vertices, leaves } => {
            let chosen: Vec<usize> = leaves.iter().take(k).map(|v| v.index()).collect();
            let family = if kind == CopyKind::K5 { Family::Omega1 } else { Family::Omega2 };
            let pattern = generate(&FamilySpec::new(family, k)).expect("k >= 1");
            let chosen_set: BTreeSet<usize> = chosen.iter().copied().collect();
            let mut centre: Vec<VertexId> = vertices
                .iter()
                .filter(|v| !chosen_set.contains(&v.index()))
                .flat_map(|v| members[v.index()].iter().copied())
                .collect();
            let mut branch = BTreeMap::new();
            for (slot, &c) in chosen.iter().enumerate() {
                let parent = tree.neighbors(VertexId(c as u32)).into_iter().find(|p| vertices.contains(p)).unwrap();
                let (x, _) = link[&(c, parent.index())];
                centre.push(x);
                let labels = typed[c].labelled(x, None);
                for (l, &h) in labels.iter().enumerate().skip(1) {
                    branch.insert(pattern.copies[slot][l], vec![h]);
                }
            }
            centre.sort();
            branch.insert(pattern.joining[0], centre);
            let witness = MinorWitness::from_branches(g, &pattern.graph, branch)?;
            Ok(Extraction { pattern, witness, notes: Vec::new() })
        }
        TreeOutcome::Path(path) => path_case(g, &typed, &members, &link, &path, kind, k),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Crossing {
    Single,
    Adjacent,
    ThroughMiddle,
}

fn path_case(
    g: &MultiGraph,
    typed: &[Copy],
    members: &[Vec<VertexId>],
    link: &BTreeMap<(usize, usize), (VertexId, VertexId)>,
    path: &[VertexId],
    kind: CopyKind,
    k: usize,
) -> Result<Extraction, ExtractError> {
    let nc = typed.len();
    let mut notes = Vec::new();
    // lift the quotient path to a host path, segment by segment
    let mut host_path: Vec<VertexId> = Vec::new();
    // per copy on the path: (index in host_path of entry, crossing, entry, exit, middle)
    let mut crossings: Vec<(usize, usize, Crossing, VertexId, VertexId, Option<VertexId>)> = Vec::new();
    for (pos, node) in path.iter().enumerate() {
        let x = node.index();
        let entry = (pos > 0).then(|| link[&(x, path[pos - 1].index())].0);
        let exit = (pos + 1 < path.len()).then(|| link[&(x, path[pos + 1].index())].0);
        let (ein, eout) = match (entry, exit) {
            (Some(a), Some(b)) => (a, b),
            (Some(a), None) | (None, Some(a)) => (a, a),
            (None, None) => (members[x][0], members[x][0]),
        };
        let start = host_path.len();
        if x >= nc {
            host_path.push(ein);
            continue;
        }
        let copy = &typed[x];
        if ein == eout {
            host_path.push(ein);
            crossings.push((start, x, Crossing::Single, ein, eout, None));
        } else if copy.adjacent(ein, eout) {
            host_path.extend([ein, eout]);
            crossings.push((start, x, Crossing::Adjacent, ein, eout, None));
        } else {
            let Copy::K33(a, b) = copy else { unreachable!("K5 vertices are pairwise adjacent") };
            let other = if a.contains(&ein) { b } else { a };
            let mid = other[0];
            notes.push(format!("copy {x}: rerouted {ein}->{eout} through {mid}"));
            host_path.extend([ein, mid, eout]);
            crossings.push((start, x, Crossing::ThroughMiddle, ein, eout, Some(mid)));
        }
    }

    let mut by_type: BTreeMap<Crossing, Vec<usize>> = BTreeMap::new();
    for (i, c) in crossings.iter().enumerate() {
        by_type.entry(c.2).or_default().push(i);
    }
    // the most common crossing type; pigeonhole over at least 3k copies guarantees k
    let (&crossing, picks) = by_type.iter().rev().max_by_key(|(_, v)| v.len()).expect("path meets a copy");
    assert!(picks.len() >= k);
    let picks: Vec<usize> = picks.iter().take(k).copied().collect();

    let family = match (crossing, kind) {
        (Crossing::Single, CopyKind::K5) => Family::Omega1,
        (Crossing::Single, CopyKind::K33) => Family::Omega2,
        (Crossing::Adjacent, CopyKind::K5) => Family::Pi1,
        (Crossing::Adjacent, CopyKind::K33) => Family::Pi2,
        (Crossing::ThroughMiddle, _) => Family::Pi3,
    };
    let pattern = generate(&FamilySpec::new(family, k)).expect("k >= 1");
    let mut branch: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();

    if crossing == Crossing::Single {
        let mut centre = host_path.clone();
        for (slot, &ci) in picks.iter().enumerate() {
            let (_, x, _, v, _, _) = crossings[ci];
            for (l, &h) in typed[x].labelled(v, None).iter().enumerate().skip(1) {
                branch.insert(pattern.copies[slot][l], vec![h]);
            }
        }
        centre.sort();
        branch.insert(pattern.joining[0], centre);
    } else {
        // joining j collects the host path between the exit of pick j-1 and the entry of pick j
        let second_label = if family == Family::Pi2 { 3 } else { 1 };
        let mut cursor = 0usize;
        for (slot, &ci) in picks.iter().enumerate() {
            let (start, x, _, ein, eout, mid) = crossings[ci];
            let seg: Vec<VertexId> = host_path[cursor..=start].to_vec();
            branch.insert(pattern.joining[slot], seg);
            let labels = typed[x].labelled(ein, Some((eout, second_label)));
            for (l, &h) in labels.iter().enumerate() {
                if l == 0 || l == second_label {
                    continue;
                }
                branch.insert(pattern.copies[slot][l], vec![h]);
            }
            cursor = start + if mid.is_some() { 2 } else { 1 };
            debug_assert_eq!(host_path[cursor], eout);
        }
        branch.insert(pattern.joining[k], host_path[cursor..].to_vec());
    }
    let witness = MinorWitness::from_branches(g, &pattern.graph, branch)?;
    Ok(Extraction { pattern, witness, notes })
}
