//! Planarity by path addition (Demoucron, Malgrange and Pertuiset) on each
//! block, with a Kuratowski subgraph extracted by edge deletion when the
//! graph is not planar.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{dart_vertex, Dart, EmbeddedGraph};
use crate::graph::{blocks, EdgeId, MultiGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// A subdivision of K5 or K3,3 inside the tested graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kuratowski {
    pub kind: KuratowskiKind,
    pub edges: Vec<EdgeId>,
    /// Vertices of degree at least 3 in the subdivision.
    pub branch: Vec<VertexId>,
}

#[derive(Clone, Debug)]
pub enum Planarity {
    /// A rotation system of genus 0 (all signatures +1).
    Planar(EmbeddedGraph),
    NonPlanar(Kuratowski),
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar(_))
    }
}

/// Loops and all but the smallest edge of each parallel class removed; ids kept.
fn simple_core(g: &MultiGraph) -> MultiGraph {
    let mut s = g.clone();
    for (e, u, v) in g.edges() {
        if u == v {
            s.remove_edge(e).unwrap();
        }
    }
    s.simplify_in_place();
    s
}

pub fn is_planar_fast(g: &MultiGraph) -> bool {
    planar_rotation(&simple_core(g)).is_some()
}

pub fn is_planar(g: &MultiGraph) -> Planarity {
    let core = simple_core(g);
    match planar_rotation(&core) {
        Some(rot) => Planarity::Planar(reinsert(g, &core, rot)),
        None => Planarity::NonPlanar(kuratowski(&core)),
    }
}

/// Puts loops and parallel edges back next to a sibling dart.
fn reinsert(g: &MultiGraph, core: &MultiGraph, mut rot: Vec<Vec<Dart>>) -> EmbeddedGraph {
    rot.resize(g.vertex_bound(), Vec::new());
    let mut rep: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    for (e, u, v) in core.edges() {
        rep.insert((u.min(v), u.max(v)), e);
    }
    for (e, u, v) in g.edges() {
        if core.has_edge_id(e) {
            continue;
        }
        if u == v {
            rot[u.index()].extend([Dart::new(e, 0), Dart::new(e, 1)]);
            continue;
        }
        let sib = rep[&(u.min(v), u.max(v))];
        let at = |x: VertexId, d: Dart| if dart_vertex(g, d) == x { d } else { d.other() };
        let a = at(u, Dart::new(sib, 0));
        let b = a.other();
        let (na, nb) = (Dart::new(e, 0), Dart::new(e, 1));
        let ru = &mut rot[u.index()];
        let i = ru.iter().position(|&d| d == a).unwrap();
        ru.insert(i + 1, na);
        let rv = &mut rot[v.index()];
        let j = rv.iter().position(|&d| d == b).unwrap();
        rv.insert(j, nb);
    }
    EmbeddedGraph::new(g.clone(), rot, vec![1; g.edge_bound()]).expect("reinsertion keeps the rotation valid")
}

/// Rotation system of a planar embedding of a simple graph, or `None`.
pub(crate) fn planar_rotation(g: &MultiGraph) -> Option<Vec<Vec<Dart>>> {
    let mut rot = vec![Vec::new(); g.vertex_bound()];
    for block in blocks(g) {
        let b = g.edge_subgraph(&block.iter().copied().collect());
        let brot = if block.len() == 1 {
            let (u, v) = g.endpoints(block[0]).unwrap();
            let mut r = vec![Vec::new(); g.vertex_bound()];
            r[u.index()].push(Dart::new(block[0], 0));
            r[v.index()].push(Dart::new(block[0], 1));
            r
        } else {
            embed_biconnected(&b)?
        };
        for (v, r) in brot.into_iter().enumerate() {
            rot[v].extend(r);
        }
    }
    Some(rot)
}

struct FaceInfo {
    vertices: BTreeSet<VertexId>,
    /// arrival dart at each vertex of the face
    corner: BTreeMap<VertexId, Dart>,
}

/// Path addition on a 2-connected simple graph with at least three vertices.
fn embed_biconnected(g: &MultiGraph) -> Option<Vec<Vec<Dart>>> {
    let n = g.vertex_count();
    if g.edge_count() > 3 * n - 6 {
        return None;
    }
    let vb = g.vertex_bound();
    let mut in_v = vec![false; vb];
    let mut in_e = vec![false; g.edge_bound()];
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); vb];
    let at = |x: VertexId, e: EdgeId| {
        let d = Dart::new(e, 0);
        if dart_vertex(g, d) == x {
            d
        } else {
            d.other()
        }
    };

    // initial cycle: an edge plus a shortest path around it
    let (e0, s, t) = g.edges().next()?;
    let path = bfs_path(g, t, |x| x == s, |e| e != e0, |_| true)?;
    let mut cycle_edges = vec![e0];
    cycle_edges.extend(path.1.iter().copied());
    let mut verts = vec![s, t];
    verts.extend(path.0.iter().copied());
    // verts: s, t, ..., s ; edges e0 (s-t), then path edges
    for (i, &e) in cycle_edges.iter().enumerate() {
        let (a, b) = (verts[i], verts[i + 1]);
        rot[a.index()].push(at(a, e));
        rot[b.index()].push(at(b, e));
        in_v[a.index()] = true;
        in_e[e.index()] = true;
    }

    loop {
        if in_e.iter().enumerate().all(|(e, &x)| x || !g.has_edge_id(EdgeId(e as u32))) {
            return Some(rot);
        }
        let faces = faces_of(g, &rot, &in_e);
        let fragments = fragments(g, &in_v, &in_e);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> =
                (0..faces.len()).filter(|&f| frag.attachments.is_subset(&faces[f].vertices)).collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("some fragment remains");
        let frag = &fragments[fi];
        let (pv, pe) = fragment_path(g, frag, &in_v);
        let face = &faces[face];
        let u = pv[0];
        let w = *pv.last().unwrap();
        let xu = face.corner[&u];
        let xw = face.corner[&w];
        let ru = &mut rot[u.index()];
        let i = ru.iter().position(|&d| d == xu).unwrap();
        ru.insert(i + 1, at(u, pe[0]));
        let rw = &mut rot[w.index()];
        let j = rw.iter().position(|&d| d == xw).unwrap();
        rw.insert(j + 1, at(w, *pe.last().unwrap()));
        for k in 1..pv.len() - 1 {
            let x = pv[k];
            rot[x.index()] = vec![at(x, pe[k - 1]), at(x, pe[k])];
            in_v[x.index()] = true;
        }
        for &e in &pe {
            in_e[e.index()] = true;
        }
    }
}

fn faces_of(g: &MultiGraph, rot: &[Vec<Dart>], in_e: &[bool]) -> Vec<FaceInfo> {
    let mut succ = vec![Dart::new(EdgeId(0), 0); 2 * g.edge_bound()];
    for r in rot {
        for i in 0..r.len() {
            succ[r[i].index()] = r[(i + 1) % r.len()];
        }
    }
    let mut seen = vec![false; 2 * g.edge_bound()];
    let mut out = Vec::new();
    for (e, _, _) in g.edges() {
        if !in_e[e.index()] {
            continue;
        }
        for side in 0..2 {
            let start = Dart::new(e, side);
            if seen[start.index()] {
                continue;
            }
            let mut info = FaceInfo { vertices: BTreeSet::new(), corner: BTreeMap::new() };
            let mut d = start;
            loop {
                seen[d.index()] = true;
                let arrive = d.other();
                let x = dart_vertex(g, arrive);
                info.vertices.insert(x);
                info.corner.insert(x, arrive);
                d = succ[arrive.index()];
                if d == start {
                    break;
                }
            }
            out.push(info);
        }
    }
    out
}

struct Fragment {
    interior: BTreeSet<VertexId>,
    edges: BTreeSet<EdgeId>,
    attachments: BTreeSet<VertexId>,
}

fn fragments(g: &MultiGraph, in_v: &[bool], in_e: &[bool]) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (e, u, v) in g.edges() {
        if !in_e[e.index()] && in_v[u.index()] && in_v[v.index()] {
            out.push(Fragment { interior: BTreeSet::new(), edges: [e].into(), attachments: [u, v].into() });
        }
    }
    let mut seen = vec![false; g.vertex_bound()];
    for s in g.vertices() {
        if in_v[s.index()] || seen[s.index()] {
            continue;
        }
        let mut frag = Fragment { interior: BTreeSet::new(), edges: BTreeSet::new(), attachments: BTreeSet::new() };
        seen[s.index()] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            frag.interior.insert(x);
            for &e in g.incident(x) {
                frag.edges.insert(e);
                let y = g.opposite(e, x).unwrap();
                if in_v[y.index()] {
                    frag.attachments.insert(y);
                } else if !seen[y.index()] {
                    seen[y.index()] = true;
                    stack.push(y);
                }
            }
        }
        out.push(frag);
    }
    out
}

/// A path through the fragment between two distinct attachments.
fn fragment_path(g: &MultiGraph, frag: &Fragment, in_v: &[bool]) -> (Vec<VertexId>, Vec<EdgeId>) {
    if frag.interior.is_empty() {
        let e = *frag.edges.iter().next().unwrap();
        let (u, v) = g.endpoints(e).unwrap();
        return (vec![u, v], vec![e]);
    }
    let a = *frag.attachments.iter().next().unwrap();
    let (pv, pe) = bfs_path(
        g,
        a,
        |x| in_v[x.index()] && x != a,
        |e| frag.edges.contains(&e),
        |x| frag.interior.contains(&x),
    )
    .expect("a 2-connected fragment has two attachments");
    let mut verts = vec![a];
    verts.extend(pv);
    (verts, pe)
}

/// BFS from `from` to the first vertex satisfying `goal`, using edges accepted
/// by `edge_ok` and passing only through vertices accepted by `through`.
/// Returns the vertices after `from` and the edges, in order.
fn bfs_path(
    g: &MultiGraph,
    from: VertexId,
    goal: impl Fn(VertexId) -> bool,
    edge_ok: impl Fn(EdgeId) -> bool,
    through: impl Fn(VertexId) -> bool,
) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
    let mut prev: Vec<Option<(VertexId, EdgeId)>> = vec![None; g.vertex_bound()];
    let mut seen = vec![false; g.vertex_bound()];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &e in g.incident(x) {
            if !edge_ok(e) {
                continue;
            }
            let y = g.opposite(e, x).unwrap();
            if seen[y.index()] {
                continue;
            }
            if goal(y) {
                let mut vs = vec![y];
                let mut es = vec![e];
                let mut cur = x;
                while cur != from {
                    let (p, pe) = prev[cur.index()].unwrap();
                    vs.push(cur);
                    es.push(pe);
                    cur = p;
                }
                vs.reverse();
                es.reverse();
                return Some((vs, es));
            }
            if through(y) {
                seen[y.index()] = true;
                prev[y.index()] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    None
}

/// Deletes edges while the graph stays non-planar; what remains is a
/// subdivision of K5 or K3,3.
fn kuratowski(core: &MultiGraph) -> Kuratowski {
    let mut h = core.clone();
    for e in core.edge_ids().collect::<Vec<_>>() {
        let mut trial = h.clone();
        trial.remove_edge(e).unwrap();
        if planar_rotation(&trial).is_none() {
            h = trial;
        }
    }
    let edges: Vec<EdgeId> = h.edge_ids().collect();
    let branch: Vec<VertexId> = h.vertices().filter(|&v| h.degree(v) >= 3).collect();
    let kind = if branch.len() == 5 && branch.iter().all(|&v| h.degree(v) == 4) {
        KuratowskiKind::K5
    } else {
        debug_assert!(branch.len() == 6 && branch.iter().all(|&v| h.degree(v) == 3));
        KuratowskiKind::K33
    };
    Kuratowski { kind, edges, branch }
}
