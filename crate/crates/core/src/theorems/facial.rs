use std::collections::BTreeSet;

use super::validate::hanging_lift_components;
use super::TheoremError;
use crate::covers::{cover_add_triangle_edge, verify_cover, CoverMap};
use crate::embedding::{is_edge_set_contractible, switch_labels, Dart, EmbeddedGraph};
use crate::families::{Family, FamilyInstance};
use crate::graph::{EdgeId, VertexId};

#[derive(Clone, Debug)]
pub struct FacialRewrite {
    pub cover: CoverMap,
    pub embedding: EmbeddedGraph,
    /// Number of facial cycles of length at least 6 split into triangles.
    pub rewired: usize,
    pub faces_before: usize,
    pub faces_after: usize,
}

/// Splits every contractible lifted hanging triangle of length `3r > 3`
/// into `r` triangles. Along the cycle `y1 .. y3r`, the edges `y3j y3j+1`
/// are replaced by `y3j-2 y3j`, each new edge taking the rotation slots of
/// the removed edges at its ends. The new edge lies over the same base edge
/// as the one it replaces, so the result is again a cover of the same ply.
pub fn normalize_facial_triangles(
    c: &CoverMap,
    eg: &EmbeddedGraph,
    inst: &FamilyInstance,
) -> Result<FacialRewrite, TheoremError> {
    if !matches!(inst.spec.family, Family::Theta1 | Family::Pi1) {
        return Err(TheoremError::NotApplicable(format!("{} has no hanging triangles", inst.spec)));
    }
    verify_cover(c)?;
    if c.base != inst.graph || eg.graph() != &c.cover {
        return Err(TheoremError::Mismatch("cover, family and embedding disagree".into()));
    }
    let faces = eg.trace_faces();
    let faces_before = faces.count();
    let face_sets: Vec<(usize, BTreeSet<EdgeId>)> =
        faces.faces.iter().map(|f| (f.len(), f.edges().into_iter().collect())).collect();

    let mut cover = c.clone();
    let mut work = eg.clone();
    let mut rewired = 0;
    for (vs, es) in hanging_lift_components(c, inst)? {
        if es.len() <= 3 || !is_edge_set_contractible(eg, &es)? {
            continue;
        }
        if es.len() % 3 != 0 || vs.len() != es.len() {
            return Err(TheoremError::Mismatch("lifted hanging triangle is not a cycle".into()));
        }
        if !face_sets.iter().any(|(len, set)| *len == es.len() && *set == es) {
            return Err(TheoremError::Contradiction(format!(
                "contractible lifted cycle of length {} is not facial",
                es.len()
            )));
        }
        let labels = switch_labels(work.graph(), work.signatures(), es.iter().copied())
            .expect("contractible cycles are two-sided");
        for &v in &vs {
            if labels[v.index()] < 0 {
                work.switch_vertex(v);
            }
        }
        let (ys, ce) = walk_cycle(&work, &vs, &es);
        let len = ys.len();
        let r = len / 3;
        let (mut graph, mut rotation, mut signature) = work.into_parts();
        let slot = |rotation: &[Vec<Dart>], v: VertexId, e: EdgeId| {
            rotation[v.index()].iter().position(|d| d.edge == e).expect("cycle edge at its vertex")
        };
        let mut plan = Vec::with_capacity(r);
        for j in 1..=r {
            let (a, b) = (ys[3 * j - 3], ys[3 * j - 1]);
            let prev = ce[(3 * j + len - 4) % len];
            plan.push((a, slot(&rotation, a, prev), b, slot(&rotation, b, ce[3 * j - 1]), ce[3 * j - 1]));
        }
        for &(a, pa, b, pb, removed) in &plan {
            let f = graph.add_edge(a, b)?;
            rotation[a.index()][pa] = Dart::new(f, 0);
            rotation[b.index()][pb] = Dart::new(f, 1);
            signature.push(1);
            let image = cover.emap[removed.index()];
            cover.emap.push(image);
        }
        for &(.., removed) in &plan {
            graph.remove_edge(removed)?;
            cover.emap[removed.index()] = None;
        }
        cover.cover = graph.clone();
        work = EmbeddedGraph::new(graph, rotation, signature)?;
        rewired += 1;
    }
    let faces_after = work.trace_faces().count();
    Ok(FacialRewrite { cover, embedding: work, rewired, faces_before, faces_after })
}

/// Cycle vertices in order from the smallest, with `ce[i]` joining
/// `ys[i]` and `ys[i + 1]`.
fn walk_cycle(eg: &EmbeddedGraph, vs: &BTreeSet<VertexId>, es: &BTreeSet<EdgeId>) -> (Vec<VertexId>, Vec<EdgeId>) {
    let g = eg.graph();
    let start = *vs.iter().next().unwrap();
    let (mut ys, mut ce) = (vec![start], Vec::new());
    let mut used = BTreeSet::new();
    let mut at = start;
    loop {
        let e = *g.incident(at).iter().filter(|e| es.contains(e) && !used.contains(*e)).min().unwrap();
        used.insert(e);
        ce.push(e);
        at = g.opposite(e, at).unwrap();
        if at == start {
            break;
        }
        ys.push(at);
    }
    (ys, ce)
}

/// Lifts the Y-minor step that adds the edge `ab` at a degree-3 vertex `v`,
/// keeping the cover embedded. Every vertex over `v` has its neighbours over
/// `a` and `b` on a common face; the new edge is drawn through that face and
/// splits it, so the genus is unchanged.
pub fn add_triangle_edge_embedded(
    c: &CoverMap,
    eg: &EmbeddedGraph,
    v: VertexId,
    a: VertexId,
    b: VertexId,
) -> Result<(CoverMap, EmbeddedGraph), TheoremError> {
    if eg.graph() != &c.cover {
        return Err(TheoremError::Mismatch("embedding is not of the cover graph".into()));
    }
    let out = cover_add_triangle_edge(c, v, a, b)?;
    let first_new = c.cover.edge_bound();
    let (_, mut rotation, mut signature) = eg.clone().into_parts();
    for (i, w) in c.fiber(v).into_iter().enumerate() {
        let f = EdgeId((first_new + i) as u32);
        let (x, y) = out.cover.endpoints(f).unwrap();
        let to = |t: VertexId| {
            let e = *c.cover.incident(w).iter().find(|&&e| c.cover.opposite(e, w) == Some(t)).unwrap();
            let here = rotation[w.index()].iter().position(|d| d.edge == e).unwrap();
            (e, here)
        };
        let ((ex, px), (ey, py)) = (to(x), to(y));
        let deg = rotation[w.index()].len();
        // the face runs p -> w -> q with q's dart right after p's at w
        let ends = if (px + 1) % deg == py { [(x, ex, 0u8, true), (y, ey, 1, false)] } else { [(y, ey, 1, true), (x, ex, 0, false)] };
        let mut chord_sign = 1;
        for (t, e, side, entering) in ends {
            let label = eg.signature(e);
            chord_sign *= label;
            let rot = &mut rotation[t.index()];
            let at = rot.iter().position(|d| d.edge == e).unwrap();
            // entering end goes before its dart, leaving end after; a
            // negative label means the rotation there runs the other way
            let after = entering == (label < 0);
            rot.insert(if after { at + 1 } else { at }, Dart::new(f, side));
        }
        signature.push(chord_sign);
    }
    let embedding = EmbeddedGraph::new(out.cover.clone(), rotation, signature)?;
    Ok((out, embedding))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::covers::{derived_cover, VoltageAssignment};
    use crate::families::{generate, FamilySpec};
    use crate::theorems::embedding_genus;

    /// A 2-ply cover of theta1:2 where the first hanging triangle lifts to a
    /// 6-cycle, embedded with that cycle bounding a face.
    pub(crate) fn facial_hexagon_cover() -> (FamilyInstance, CoverMap, EmbeddedGraph) {
        let inst = generate(&FamilySpec::new(Family::Theta1, 2)).unwrap();
        let tri = &inst.hanging[0];
        let twisted = inst.graph.edges_between(tri[0], tri[1])[0];
        let mut va = VoltageAssignment::identity(inst.graph.clone(), 2);
        va.set(twisted, vec![1, 0]).unwrap();
        let c = derived_cover(&va);
        let mut eg = EmbeddedGraph::from_incidence_order(c.cover.clone());
        let tri: BTreeSet<VertexId> = tri.iter().copied().collect();
        for y in c.cover.vertices() {
            if !c.image(y).is_some_and(|x| tri.contains(&x)) {
                continue;
            }
            let rot = eg.rotation(y).to_vec();
            let (mut cyc, rest): (Vec<Dart>, Vec<Dart>) = rot.into_iter().partition(|d| {
                let z = c.cover.opposite(d.edge, y).unwrap();
                tri.contains(&c.image(z).unwrap())
            });
            // predecessor along the hexagon first, then the successor
            let nxt = |d: &Dart| c.cover.opposite(d.edge, y).unwrap();
            if ordered_after(&c, y, nxt(&cyc[0]), &tri) {
                cyc.swap(0, 1);
            }
            eg.set_rotation(y, cyc.into_iter().chain(rest).collect()).unwrap();
        }
        (inst, c, eg)
    }

    /// Orients the hexagon by walking it from its smallest vertex.
    fn ordered_after(c: &CoverMap, y: VertexId, z: VertexId, tri: &BTreeSet<VertexId>) -> bool {
        let on = |w: VertexId| c.image(w).is_some_and(|x| tri.contains(&x));
        let start = c.cover.vertices().find(|&w| on(w)).unwrap();
        let mut order = vec![start];
        let mut prev = None;
        let mut at = start;
        loop {
            let next = c.cover.neighbors(at).into_iter().filter(|&w| on(w) && Some(w) != prev).min().unwrap();
            if next == start {
                break;
            }
            order.push(next);
            prev = Some(at);
            at = next;
        }
        let pos = |w| order.iter().position(|&o| o == w).unwrap();
        (pos(y) + 1) % order.len() == pos(z)
    }

    #[test]
    fn hexagon_becomes_two_triangles() {
        let (inst, c, eg) = facial_hexagon_cover();
        let before = crate::theorems::validate_embedded_cover(&c, &inst, &eg).unwrap();
        assert!(before.contractible_other >= 1);
        let out = normalize_facial_triangles(&c, &eg, &inst).unwrap();
        assert_eq!(out.rewired, 1);
        assert_eq!(verify_cover(&out.cover), Ok(2));
        assert_eq!(out.cover.cover.vertex_count(), c.cover.vertex_count());
        assert_eq!(out.cover.cover.edge_count(), c.cover.edge_count());
        let after = crate::theorems::validate_embedded_cover(&out.cover, &inst, &out.embedding).unwrap();
        assert_eq!(after.facial_triangles, before.facial_triangles + 2);
        assert_eq!(after.contractible_other, before.contractible_other - 1);
        assert_eq!(out.faces_after, out.embedding.trace_faces().count());
        assert_eq!(embedding_genus(&eg) as i64 - embedding_genus(&out.embedding) as i64, out.faces_after as i64 - out.faces_before as i64);
    }

    #[test]
    fn triangles_left_alone() {
        let inst = generate(&FamilySpec::new(Family::Theta1, 2)).unwrap();
        let c = CoverMap::identity(&inst.graph);
        let eg = EmbeddedGraph::from_incidence_order(inst.graph.clone());
        let out = normalize_facial_triangles(&c, &eg, &inst).unwrap();
        assert_eq!(out.rewired, 0);
        assert_eq!(out.embedding, eg);
        let omega = generate(&FamilySpec::new(Family::Omega1, 2)).unwrap();
        let c = CoverMap::identity(&omega.graph);
        let eg = EmbeddedGraph::from_incidence_order(omega.graph.clone());
        assert!(matches!(normalize_facial_triangles(&c, &eg, &omega), Err(TheoremError::NotApplicable(_))));
    }

    #[test]
    fn nonfacial_contractible_hexagon_is_reported() {
        let (inst, c, mut eg) = facial_hexagon_cover();
        // move a spoke between the two hexagon darts at one vertex
        let y = c.cover.vertices().find(|&w| c.image(w) == Some(inst.hanging[0][0])).unwrap();
        let mut rot = eg.rotation(y).to_vec();
        rot.swap(1, 2);
        eg.set_rotation(y, rot).unwrap();
        let hexagon: BTreeSet<EdgeId> = hanging_lift_components(&c, &inst)
            .unwrap()
            .into_iter()
            .find(|(_, es)| es.len() == 6)
            .unwrap()
            .1;
        let result = normalize_facial_triangles(&c, &eg, &inst);
        if is_edge_set_contractible(&eg, &hexagon).unwrap() {
            assert!(matches!(result, Err(TheoremError::Contradiction(_))));
        } else {
            assert_eq!(result.unwrap().rewired, 0);
        }
    }

    mod prop {
        use super::*;
        use crate::embedding::tests_support::random_embedding;
        use crate::graph::named::complete_bipartite;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn chord_splits_one_face_per_sheet(p in 1usize..4, perms in proptest::collection::vec(any::<u64>(), 9), seed in any::<u64>()) {
                let base = complete_bipartite(3, 3);
                let mut va = VoltageAssignment::identity(base.clone(), p);
                for (e, x) in base.edge_ids().zip(perms) {
                    va.set(e, crate::covers::permutation_from_index(p, x % (1..=p as u64).product::<u64>())).unwrap();
                }
                let c = derived_cover(&va);
                let eg = random_embedding(c.cover.clone(), seed);
                let (out, emb) = add_triangle_edge_embedded(&c, &eg, VertexId(0), VertexId(3), VertexId(4)).unwrap();
                prop_assert_eq!(verify_cover(&out), Ok(p));
                prop_assert_eq!(emb.trace_faces().count(), eg.trace_faces().count() + p);
                prop_assert_eq!(embedding_genus(&emb), embedding_genus(&eg));
            }
        }
    }
}
