//! Lifting Y-minor operations from a base graph to its covers. Each function
//! applies one operation to the base and the matching construction to the
//! cover, so the result covers the new base at the same ply.

use std::collections::BTreeSet;

use super::{CoverError, CoverMap};
use crate::graph::{EdgeId, VertexId};

/// Deletes `e` from the base and every edge over it from the cover.
pub fn cover_delete_edge(c: &CoverMap, e: EdgeId) -> Result<CoverMap, CoverError> {
    c.base.check_edge(e)?;
    let mut out = c.clone();
    out.base.remove_edge(e)?;
    for f in c.edge_fiber(e) {
        out.cover.remove_edge(f)?;
        out.emap[f.index()] = None;
    }
    Ok(out)
}

/// Deletes `v` from the base and its fibre from the cover.
pub fn cover_delete_vertex(c: &CoverMap, v: VertexId) -> Result<CoverMap, CoverError> {
    c.base.check_vertex(v)?;
    let mut out = c.clone();
    out.base.remove_vertex(v)?;
    for w in c.fiber(v) {
        for &f in c.cover.incident(w) {
            out.emap[f.index()] = None;
        }
        out.cover.remove_vertex(w)?;
        out.vmap[w.index()] = None;
    }
    Ok(out)
}

/// Contracts `e` in the base and every lift of `e` in the cover. Base edges
/// parallel to `e` would become loops; they and their lifts are deleted.
pub fn cover_contract_edge(c: &CoverMap, e: EdgeId) -> Result<CoverMap, CoverError> {
    let (u, v) = c.base.check_edge(e)?;
    if u == v {
        return Err(CoverError::Precondition(format!("edge {e} is a loop")));
    }
    let mut out = c.clone();
    for f in c.base.edges_between(u, v) {
        if f != e {
            out = cover_delete_edge(&out, f)?;
        }
    }
    let kept = out.base.contract_in_place(e, false)?;
    for f in c.edge_fiber(e) {
        let (x, y) = out.cover.endpoints(f).unwrap();
        let gone = x.max(y);
        let stay = out.cover.contract_in_place(f, false)?;
        out.emap[f.index()] = None;
        out.vmap[gone.index()] = None;
        out.vmap[stay.index()] = Some(kept);
    }
    Ok(out)
}

/// Adds the edge `ab` next to a degree-3 vertex `v` with neighbours `a, b`.
/// In the cover, every vertex over `v` gets the edge between its
/// neighbours over `a` and over `b`.
pub fn cover_add_triangle_edge(c: &CoverMap, v: VertexId, a: VertexId, b: VertexId) -> Result<CoverMap, CoverError> {
    check_triangle_move(&c.base, v, a, b)?;
    let mut out = c.clone();
    let base_edge = out.base.add_edge(a, b)?;
    for w in c.fiber(v) {
        let over = |t: VertexId| {
            c.cover.neighbors(w).into_iter().find(|&x| c.image(x) == Some(t)).ok_or_else(|| {
                CoverError::Precondition(format!("cover vertex {w} has no neighbour over {t}; input is not a cover"))
            })
        };
        let (x, y) = (over(a)?, over(b)?);
        let f = out.cover.add_edge(x, y)?;
        debug_assert_eq!(f.index(), out.emap.len());
        out.emap.push(Some(base_edge));
    }
    Ok(out)
}

pub(crate) fn check_triangle_move(
    g: &crate::graph::MultiGraph,
    v: VertexId,
    a: VertexId,
    b: VertexId,
) -> Result<(), CoverError> {
    for x in [v, a, b] {
        g.check_vertex(x)?;
    }
    if g.degree(v) != 3 {
        return Err(CoverError::Precondition(format!("vertex {v} has degree {}, not 3", g.degree(v))));
    }
    let nbrs: BTreeSet<VertexId> = g.neighbor_set(v);
    if nbrs.len() != 3 || nbrs.contains(&v) {
        return Err(CoverError::Precondition(format!("vertex {v} needs three distinct neighbours")));
    }
    if a == b || !nbrs.contains(&a) || !nbrs.contains(&b) {
        return Err(CoverError::Precondition(format!("{a} and {b} must be distinct neighbours of {v}")));
    }
    if g.has_edge(a, b) {
        return Err(CoverError::Precondition(format!("{a} and {b} are already adjacent")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::tests::hexagon_over_triangle;
    use super::super::voltage::tests::voltage_case;
    use super::super::{derived_cover, verify_cover};
    use super::*;
    use crate::graph::named::*;
    use crate::graph::{connected_components, MultiGraph};

    #[test]
    fn delete_edge_of_hexagon() {
        let c = cover_delete_edge(&hexagon_over_triangle(), EdgeId(0)).unwrap();
        assert_eq!(verify_cover(&c), Ok(2));
        assert_eq!(c.cover.edge_count(), 4);
        assert_eq!(c.base.edge_count(), 2);
        assert_eq!(connected_components(&c.cover).len(), 2);
    }

    #[test]
    fn contract_hexagon() {
        let c = cover_contract_edge(&hexagon_over_triangle(), EdgeId(0)).unwrap();
        assert_eq!(verify_cover(&c), Ok(2));
        assert_eq!((c.base.vertex_count(), c.base.edge_count()), (2, 2));
        assert_eq!((c.cover.vertex_count(), c.cover.edge_count()), (4, 4));
        let (simple, _, _) = c.cover.compact();
        assert!(crate::graph::is_isomorphic(&simple, &cycle(4)).unwrap().is_some());
    }

    #[test]
    fn triangle_edge_on_identity() {
        let c = CoverMap::identity(&star(3));
        let out = cover_add_triangle_edge(&c, VertexId(0), VertexId(1), VertexId(2)).unwrap();
        assert_eq!(verify_cover(&out), Ok(1));
        assert!(out.base.has_edge(VertexId(1), VertexId(2)));
        assert_eq!(out.cover, out.base);
    }

    #[test]
    fn preconditions() {
        let c = CoverMap::identity(&complete(4));
        assert!(matches!(
            cover_add_triangle_edge(&c, VertexId(0), VertexId(1), VertexId(2)),
            Err(CoverError::Precondition(_))
        ));
        let c = CoverMap::identity(&star(4));
        assert!(cover_add_triangle_edge(&c, VertexId(0), VertexId(1), VertexId(2)).is_err());
        let c = CoverMap::identity(&MultiGraph::from_edges(1, &[(0, 0)]));
        assert!(matches!(cover_contract_edge(&c, EdgeId(0)), Err(CoverError::Precondition(_))));
        assert!(cover_delete_edge(&c, EdgeId(3)).is_err());
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn lifted_operations_stay_covers(va in voltage_case(), pick in any::<usize>()) {
                let c = derived_cover(&va);
                let p = va.ply;
                let edges: Vec<EdgeId> = c.base.edge_ids().collect();
                let verts: Vec<VertexId> = c.base.vertices().collect();
                let e = edges[pick % edges.len().max(1)];
                prop_assert_eq!(verify_cover(&cover_delete_edge(&c, e).unwrap()), Ok(p));
                if !c.base.is_loop(e) {
                    prop_assert_eq!(verify_cover(&cover_contract_edge(&c, e).unwrap()), Ok(p));
                }
                if verts.len() > 1 {
                    let v = verts[pick % verts.len()];
                    prop_assert_eq!(verify_cover(&cover_delete_vertex(&c, v).unwrap()), Ok(p));
                }
                for &v in &verts {
                    let n: Vec<VertexId> = c.base.neighbor_set(v).into_iter().collect();
                    if n.len() == 3 && c.base.degree(v) == 3 && !n.contains(&v) {
                        for (a, b) in [(n[0], n[1]), (n[0], n[2]), (n[1], n[2])] {
                            if !c.base.has_edge(a, b) {
                                let out = cover_add_triangle_edge(&c, v, a, b).unwrap();
                                prop_assert_eq!(verify_cover(&out), Ok(p));
                            }
                        }
                    }
                }
            }
        }
    }
}
