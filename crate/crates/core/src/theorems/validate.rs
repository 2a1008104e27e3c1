use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{noncontractible_budget, ply_bound, BoundFamily, PlyBound, TheoremError};
use crate::covers::{lift_subgraph, verify_cover, CoverMap};
use crate::embedding::{is_edge_set_contractible, EmbeddedGraph};
use crate::families::{Family, FamilyInstance, FamilySpec};
use crate::graph::{connected_components, EdgeId, VertexId};

/// Euler genus of an embedding, summed over components.
pub fn embedding_genus(eg: &EmbeddedGraph) -> usize {
    let comps = connected_components(eg.graph()).len() as i64;
    (2 * comps - eg.trace_faces().euler_characteristic()) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub spec: FamilySpec,
    pub ply: usize,
    pub genus: usize,
    /// Components of the lift of all hanging components.
    pub lifted_components: usize,
    pub noncontractible: usize,
    pub budget: usize,
    /// Contractible lifted components that bound a face and have three vertices.
    pub facial_triangles: usize,
    pub contractible_other: usize,
    pub bound: PlyBound,
    /// For theta families: smallest number of joining-vertex lifts adjacent
    /// to a contractible lifted triangle once the joining edges are removed.
    pub theta_min_degree: Option<usize>,
    pub alarms: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.alarms.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family {}", self.spec);
        let _ = writeln!(out, "ply {}", self.ply);
        let _ = writeln!(out, "genus {}", self.genus);
        let _ = writeln!(out, "lifted-components {}", self.lifted_components);
        let _ = writeln!(out, "noncontractible {} budget {}", self.noncontractible, self.budget);
        let _ = writeln!(out, "facial-triangles {}", self.facial_triangles);
        let _ = writeln!(out, "contractible-other {}", self.contractible_other);
        if let Some(d) = self.theta_min_degree {
            let _ = writeln!(out, "theta-min-degree {d}");
        }
        let _ = writeln!(out, "bound {} {}", self.bound.family, self.bound);
        for a in &self.alarms {
            let _ = writeln!(out, "alarm {a}");
        }
        let _ = writeln!(out, "verdict {}", if self.passed() { "pass" } else { "alarm" });
        out
    }
}

/// Components of the preimage of the hanging components, each as its
/// vertex and edge sets in the cover.
pub(super) fn hanging_lift_components(
    c: &CoverMap,
    inst: &FamilyInstance,
) -> Result<Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)>, TheoremError> {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for comp in &inst.hanging {
        let vs: BTreeSet<VertexId> = comp.iter().copied().collect();
        vertices.extend(vs.iter().copied());
        edges.extend(c.base.edges().filter(|(_, u, v)| vs.contains(u) && vs.contains(v)).map(|(e, _, _)| e));
    }
    let lifted = lift_subgraph(c, &vertices, &edges)?.subgraph(&c.cover);
    Ok(connected_components(&lifted)
        .into_iter()
        .map(|comp| {
            let vs: BTreeSet<VertexId> = comp.into_iter().collect();
            let es = lifted.edges().filter(|(_, u, _)| vs.contains(u)).map(|(e, _, _)| e).collect();
            (vs, es)
        })
        .collect())
}

fn alarms(spec: FamilySpec, ply: usize, genus: usize, noncontractible: usize, bound: &PlyBound) -> Vec<String> {
    let FamilySpec { family, k } = spec;
    let budget = noncontractible_budget(genus);
    let mut out = Vec::new();
    if matches!(family, Family::Omega1 | Family::Theta1 | Family::Pi1) && k >= 4 && noncontractible > budget {
        out.push(format!("{noncontractible} non-contractible lifted components exceed the budget {budget}"));
    }
    if !bound.allows(ply) {
        out.push(format!("ply {ply} exceeds the bound {bound} at genus {genus}"));
    }
    if genus == 0 && matches!(family, Family::Omega1 | Family::Theta1) && k >= 2 {
        out.push(format!("planar cover of {spec}"));
    }
    out
}

/// Checks an embedded cover of a family instance against the proved
/// statements: the non-contractible budget, the ply bound at the
/// embedding's genus, and the absence of planar covers of the smallest
/// star and theta members. Violations are reported as alarms.
pub fn validate_embedded_cover(
    c: &CoverMap,
    inst: &FamilyInstance,
    eg: &EmbeddedGraph,
) -> Result<ValidationReport, TheoremError> {
    let ply = verify_cover(c)?;
    if c.base != inst.graph {
        return Err(TheoremError::Mismatch("cover base is not the family graph".into()));
    }
    if eg.graph() != &c.cover {
        return Err(TheoremError::Mismatch("embedding is not of the cover graph".into()));
    }
    let genus = embedding_genus(eg);
    let family = inst.spec.family;
    let k = inst.spec.k;

    let faces: Vec<BTreeSet<EdgeId>> =
        eg.trace_faces().faces.iter().map(|f| f.edges().into_iter().collect()).collect();

    let mut noncontractible = 0;
    let mut facial_triangles = 0;
    let mut contractible_other = 0;
    let mut contractible_parts: Vec<BTreeSet<VertexId>> = Vec::new();
    let components = hanging_lift_components(c, inst)?;
    for (vs, es) in &components {
        if !es.is_empty() && !is_edge_set_contractible(eg, es)? {
            noncontractible += 1;
            continue;
        }
        if vs.len() == 3 && es.len() == 3 && faces.contains(es) {
            facial_triangles += 1;
        } else {
            contractible_other += 1;
        }
        contractible_parts.push(vs.clone());
    }

    let budget = noncontractible_budget(genus);
    let bound = ply_bound(BoundFamily::for_family(family), k, genus);
    let alarms = alarms(inst.spec, ply, genus, noncontractible, &bound);

    let theta_min_degree = (family == Family::Theta1 && !contractible_parts.is_empty()).then(|| {
        let joining: BTreeSet<VertexId> = inst.joining.iter().copied().collect();
        contractible_parts
            .iter()
            .map(|part| {
                let mut outside = BTreeSet::new();
                for &w in part {
                    for x in c.cover.neighbors(w) {
                        if c.image(x).is_some_and(|v| joining.contains(&v)) {
                            outside.insert(x);
                        }
                    }
                }
                outside.len()
            })
            .min()
            .unwrap()
    });

    Ok(ValidationReport {
        spec: inst.spec,
        ply,
        genus,
        lifted_components: components.len(),
        noncontractible,
        budget,
        facial_triangles,
        contractible_other,
        bound,
        theta_min_degree,
        alarms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{cotree_edges, derived_cover, VoltageAssignment};
    use crate::embedding::{min_euler_genus, DEFAULT_TRACE_BUDGET};
    use crate::families::generate;

    #[test]
    fn omega15_identity_cover() {
        let inst = generate(&FamilySpec::new(Family::Omega1, 5)).unwrap();
        let r = min_euler_genus(&inst.graph, DEFAULT_TRACE_BUDGET).unwrap();
        assert!(r.exact);
        assert_eq!(r.genus, 5);
        let c = CoverMap::identity(&inst.graph);
        let rep = validate_embedded_cover(&c, &inst, &r.witness).unwrap();
        assert_eq!(rep.ply, 1);
        assert_eq!(rep.genus, 5);
        assert!(rep.bound.allows(1));
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(rep.to_text().ends_with("verdict pass\n"));
    }

    #[test]
    fn k37_double_cover() {
        let inst = generate(&FamilySpec::new(Family::K3k, 7)).unwrap();
        let mut va = VoltageAssignment::identity(inst.graph.clone(), 2);
        for e in cotree_edges(&inst.graph) {
            va.set(e, vec![1, 0]).unwrap();
        }
        let c = derived_cover(&va);
        let r = min_euler_genus(&c.cover, DEFAULT_TRACE_BUDGET).unwrap();
        let rep = validate_embedded_cover(&c, &inst, &r.witness).unwrap();
        assert_eq!(rep.ply, 2);
        assert_eq!(rep.genus, r.genus);
        // 2 <= 2g holds for every genus the search can report
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn alarm_paths() {
        let spec = FamilySpec::new(Family::Omega1, 2);
        let planar = alarms(spec, 2, 0, 0, &ply_bound(BoundFamily::Omega1, 2, 0));
        assert_eq!(planar, vec!["planar cover of omega1:2".to_string()]);
        let spec = FamilySpec::new(Family::Theta1, 9);
        let b = ply_bound(BoundFamily::Theta1, 9, 1);
        let over = alarms(spec, 29, 1, 7, &b);
        assert_eq!(over.len(), 2, "{over:?}");
        assert!(alarms(spec, 28, 1, 6, &b).is_empty());
        assert!(alarms(FamilySpec::new(Family::K3k, 7), 3, 1, 0, &ply_bound(BoundFamily::K3k, 7, 1))[0].starts_with("ply 3"));
    }

    #[test]
    fn mismatches_rejected() {
        let inst = generate(&FamilySpec::new(Family::Omega1, 2)).unwrap();
        let other = generate(&FamilySpec::new(Family::Theta1, 2)).unwrap();
        let c = CoverMap::identity(&other.graph);
        let eg = EmbeddedGraph::from_incidence_order(other.graph.clone());
        assert!(matches!(validate_embedded_cover(&c, &inst, &eg), Err(TheoremError::Mismatch(_))));
    }
}
