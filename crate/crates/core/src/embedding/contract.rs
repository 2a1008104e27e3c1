//! Contractibility of cycles and connected subgraphs.
//!
//! The surface is cut along the subgraph: every vertex of the subgraph splits
//! into one vertex per sector between consecutive subgraph darts, and each
//! subgraph edge into two copies bounding its sides. The holes left behind
//! show up as faces of the cut graph with a corner wrapping from the last to
//! the first dart of a sector vertex. The subgraph lies in a disk exactly
//! when its own ribbon neighbourhood is a sphere with holes and all holes
//! but one are closed off by disk pieces.

use std::collections::{BTreeMap, BTreeSet};

use super::{dart_vertex, switch_labels, Dart, EmbeddedGraph, EmbeddingError};
use crate::graph::{connected_components, is_connected, EdgeId, MultiGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub contractible: bool,
}

/// Whether a cycle bounds a disk. The edges must form one cycle (a single
/// loop counts).
pub fn is_cycle_contractible(eg: &EmbeddedGraph, cycle: &[EdgeId]) -> Result<bool, EmbeddingError> {
    let g = eg.graph();
    let set: BTreeSet<EdgeId> = cycle.iter().copied().collect();
    if set.is_empty() {
        return Err(EmbeddingError::NotACycle("no edges".into()));
    }
    if set.len() != cycle.len() {
        return Err(EmbeddingError::NotACycle("repeated edge".into()));
    }
    let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &e in &set {
        let (u, v) = g.endpoints(e).ok_or(EmbeddingError::UnknownEdge(e))?;
        *deg.entry(u).or_default() += 1;
        *deg.entry(v).or_default() += 1;
    }
    if let Some((v, d)) = deg.iter().find(|(_, &d)| d != 2) {
        return Err(EmbeddingError::NotACycle(format!("vertex {v} has degree {d} in the edge set")));
    }
    if !is_connected(&g.edge_subgraph(&set)) {
        return Err(EmbeddingError::NotACycle("edge set is not connected".into()));
    }
    contractible(eg, &set)
}

/// Whether a connected edge set lies inside a disk of the surface.
pub fn is_edge_set_contractible(eg: &EmbeddedGraph, edges: &BTreeSet<EdgeId>) -> Result<bool, EmbeddingError> {
    if let Some(&e) = edges.iter().find(|e| !eg.graph().has_edge_id(**e)) {
        return Err(EmbeddingError::UnknownEdge(e));
    }
    if edges.is_empty() {
        return Ok(true);
    }
    if !is_connected(&eg.graph().edge_subgraph(edges)) {
        return Err(EmbeddingError::Disconnected);
    }
    contractible(eg, edges)
}

/// Components of the subgraph spanned by `edges` that do not lie in a disk.
pub fn noncontractible_components(
    eg: &EmbeddedGraph,
    edges: &BTreeSet<EdgeId>,
) -> Result<Vec<ComponentReport>, EmbeddingError> {
    if let Some(&e) = edges.iter().find(|e| !eg.graph().has_edge_id(**e)) {
        return Err(EmbeddingError::UnknownEdge(e));
    }
    let sub = eg.graph().edge_subgraph(edges);
    let mut out = Vec::new();
    for comp in connected_components(&sub) {
        let members: BTreeSet<VertexId> = comp.iter().copied().collect();
        let ce: BTreeSet<EdgeId> =
            edges.iter().copied().filter(|&e| members.contains(&sub.endpoints(e).unwrap().0)).collect();
        if !contractible(eg, &ce)? {
            out.push(ComponentReport { vertices: comp, edges: ce.into_iter().collect(), contractible: false });
        }
    }
    Ok(out)
}

fn contractible(eg: &EmbeddedGraph, k: &BTreeSet<EdgeId>) -> Result<bool, EmbeddingError> {
    let g = eg.graph();
    // work inside the component of the surface that holds the edge set
    let anchor = g.endpoints(*k.iter().next().unwrap()).unwrap().0;
    let comp = connected_components(g).into_iter().find(|c| c.contains(&anchor)).unwrap();
    let members: BTreeSet<VertexId> = comp.iter().copied().collect();
    let keep: BTreeSet<EdgeId> = g.edge_ids().filter(|&e| members.contains(&g.endpoints(e).unwrap().0)).collect();
    let mut eg = eg.restrict(&keep);

    // a one-sided edge set has a Möbius band neighbourhood
    let Some(labels) = switch_labels(eg.graph(), eg.signatures(), k.iter().copied()) else {
        return Ok(false);
    };
    for v in eg.graph().vertices().collect::<Vec<_>>() {
        if labels[v.index()] < 0 {
            eg.switch_vertex(v);
        }
    }
    if eg.euler_genus()? == 0 {
        return Ok(true);
    }
    let kfaces = eg.restrict(k).trace_faces();
    let holes = kfaces.count();
    if kfaces.euler_characteristic() != 2 {
        return Ok(false);
    }
    let disks = disk_pieces(&eg, k);
    Ok(disks + 1 >= holes)
}

/// Number of pieces of the cut surface that are disks closing off one hole.
fn disk_pieces(eg: &EmbeddedGraph, k: &BTreeSet<EdgeId>) -> usize {
    let g = eg.graph();
    // sector vertices for subgraph vertices, plain copies for the rest
    let mut cut = MultiGraph::with_vertices(0);
    let mut plain: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut sectors: BTreeMap<VertexId, (Vec<Dart>, Vec<VertexId>)> = BTreeMap::new();
    for v in g.vertices() {
        let kd: Vec<Dart> = eg.rotation(v).iter().copied().filter(|d| k.contains(&d.edge)).collect();
        if kd.is_empty() {
            plain.insert(v, cut.add_vertex());
        } else {
            let ids = (0..kd.len()).map(|_| cut.add_vertex()).collect();
            sectors.insert(v, (kd, ids));
        }
    }
    let sector_index = |d: Dart| {
        let (kd, _) = &sectors[&dart_vertex(g, d)];
        kd.iter().position(|&x| x == d).unwrap()
    };
    let sector_vertex = |v: VertexId, s: isize| {
        let (kd, ids) = &sectors[&v];
        ids[s.rem_euclid(kd.len() as isize) as usize]
    };
    // non-subgraph dart -> (cut vertex, cut dart); cut edges keep the signature
    let mut new_sig = Vec::new();
    let mut moved: BTreeMap<Dart, Dart> = BTreeMap::new();
    let home = |d: Dart| -> VertexId {
        let v = dart_vertex(g, d);
        if let Some(&p) = plain.get(&v) {
            return p;
        }
        // the sector holding d follows the last subgraph dart before it
        let rot = eg.rotation(v);
        let i = rot.iter().position(|&x| x == d).unwrap();
        let (kd, _) = &sectors[&v];
        let before = (1..rot.len()).map(|j| rot[(i + rot.len() - j) % rot.len()]).find(|x| kd.contains(x)).unwrap();
        sector_vertex(v, sector_index(before) as isize)
    };
    for (e, _, _) in g.edges() {
        if k.contains(&e) {
            continue;
        }
        let (a, b) = (home(Dart::new(e, 0)), home(Dart::new(e, 1)));
        let ne = cut.add_edge(a, b).unwrap();
        new_sig.push(eg.signature(e));
        moved.insert(Dart::new(e, 0), Dart::new(ne, 0));
        moved.insert(Dart::new(e, 1), Dart::new(ne, 1));
    }
    // each subgraph edge becomes two copies; remember which copy dart opens
    // and which closes each sector
    let mut first: BTreeMap<VertexId, Dart> = BTreeMap::new();
    let mut last: BTreeMap<VertexId, Dart> = BTreeMap::new();
    for &e in k {
        let (u, v) = g.endpoints(e).unwrap();
        let su = sector_index(Dart::new(e, 0)) as isize;
        let sv = sector_index(Dart::new(e, 1)) as isize;
        let a = cut.add_edge(sector_vertex(u, su - 1), sector_vertex(v, sv)).unwrap();
        let b = cut.add_edge(sector_vertex(u, su), sector_vertex(v, sv - 1)).unwrap();
        new_sig.extend([1, 1]);
        last.insert(sector_vertex(u, su - 1), Dart::new(a, 0));
        first.insert(sector_vertex(v, sv), Dart::new(a, 1));
        first.insert(sector_vertex(u, su), Dart::new(b, 0));
        last.insert(sector_vertex(v, sv - 1), Dart::new(b, 1));
    }
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); cut.vertex_bound()];
    for v in g.vertices() {
        if let Some(&p) = plain.get(&v) {
            rot[p.index()] = eg.rotation(v).iter().map(|d| moved[d]).collect();
            continue;
        }
        let (kd, ids) = &sectors[&v];
        let r = eg.rotation(v);
        for (s, &kdart) in kd.iter().enumerate() {
            let w = ids[s];
            let start = r.iter().position(|&x| x == kdart).unwrap();
            let mut list = vec![first[&w]];
            for j in 1..r.len() {
                let d = r[(start + j) % r.len()];
                if k.contains(&d.edge) {
                    break;
                }
                list.push(moved[&d]);
            }
            list.push(last[&w]);
            rot[w.index()] = list;
        }
    }
    let cut_eg = EmbeddedGraph::new(cut, rot, new_sig).expect("cut rotation is valid");
    let cg = cut_eg.graph();

    let comps = connected_components(cg);
    let mut piece_of = vec![usize::MAX; cg.vertex_bound()];
    for (i, c) in comps.iter().enumerate() {
        for v in c {
            piece_of[v.index()] = i;
        }
    }
    let mut faces = vec![0i64; comps.len()];
    let mut caps = vec![0usize; comps.len()];
    for face in cut_eg.trace_states() {
        let p = piece_of[dart_vertex(cg, face[0].0).index()];
        faces[p] += 1;
        let len = face.len();
        let wraps = (0..len).any(|i| {
            let arrive = face[i].0.other();
            let (depart, s) = face[(i + 1) % len];
            let w = dart_vertex(cg, arrive);
            match (first.get(&w), last.get(&w)) {
                (Some(&f), Some(&l)) => (s > 0 && arrive == l && depart == f) || (s < 0 && arrive == f && depart == l),
                _ => false,
            }
        });
        if wraps {
            caps[p] += 1;
        }
    }
    let mut disks = 0;
    for (i, c) in comps.iter().enumerate() {
        let n = c.len() as i64;
        let m = c.iter().map(|&v| cg.degree(v)).sum::<usize>() as i64 / 2;
        if caps[i] == 1 && n - m + faces[i] == 2 {
            disks += 1;
        }
    }
    disks
}
