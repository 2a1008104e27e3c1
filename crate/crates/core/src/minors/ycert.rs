use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{find_subgraph_embedding, io::content_lines, is_isomorphic, EdgeId, MultiGraph, VertexId, ISO_VERTEX_LIMIT};

/// One Y-minor move. Identifiers refer to the graph as it stands when the
/// move is applied; contraction keeps the smaller endpoint id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YOp {
    /// Add the edge `ab` where `a`, `b` are neighbours of the degree-3 vertex `v`.
    AddEdge { v: VertexId, a: VertexId, b: VertexId },
    DeleteVertex(VertexId),
    DeleteEdge(EdgeId),
    ContractEdge(EdgeId),
}

impl fmt::Display for YOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YOp::AddEdge { v, a, b } => write!(f, "add {v} {a} {b}"),
            YOp::DeleteVertex(v) => write!(f, "delv {v}"),
            YOp::DeleteEdge(e) => write!(f, "dele {e}"),
            YOp::ContractEdge(e) => write!(f, "contract {e}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct YCertificate {
    pub ops: Vec<YOp>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("step {step} (`{op}`): {reason}")]
    Step { step: usize, op: String, reason: String },
    #[error("replayed graph does not match the target: {0}")]
    Mismatch(String),
    #[error("target check exceeded its search budget")]
    Budget,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl YCertificate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            let _ = writeln!(out, "{op}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CertError> {
        let mut ops = Vec::new();
        for (line, l) in content_lines(text) {
            let err = |msg: &str| CertError::Parse { line, msg: msg.into() };
            let nums: Result<Vec<u32>, _> = l.split_whitespace().skip(1).map(str::parse).collect();
            let nums = nums.map_err(|_| err("bad identifier"))?;
            let op = match (l.split_whitespace().next(), nums.as_slice()) {
                (Some("add"), &[v, a, b]) => YOp::AddEdge { v: VertexId(v), a: VertexId(a), b: VertexId(b) },
                (Some("delv"), &[v]) => YOp::DeleteVertex(VertexId(v)),
                (Some("dele"), &[e]) => YOp::DeleteEdge(EdgeId(e)),
                (Some("contract"), &[e]) => YOp::ContractEdge(EdgeId(e)),
                _ => return Err(err("expected `add v a b`, `delv v`, `dele e` or `contract e`")),
            };
            ops.push(op);
        }
        Ok(YCertificate { ops })
    }
}

/// Replays a certificate, checking every precondition.
pub fn replay_certificate(host: &MultiGraph, cert: &YCertificate) -> Result<MultiGraph, CertError> {
    let mut g = host.clone();
    for (step, op) in cert.ops.iter().enumerate() {
        let fail = |reason: String| CertError::Step { step, op: op.to_string(), reason };
        match *op {
            YOp::AddEdge { v, a, b } => {
                if !g.has_vertex(v) {
                    return Err(fail(format!("vertex {v} does not exist")));
                }
                if g.degree(v) != 3 {
                    return Err(fail(format!("vertex {v} has degree {}, not 3", g.degree(v))));
                }
                if a == b || !g.has_edge(v, a) || !g.has_edge(v, b) {
                    return Err(fail(format!("{a} and {b} are not two distinct neighbours of {v}")));
                }
                if g.has_edge(a, b) {
                    return Err(fail(format!("{a} and {b} are already adjacent")));
                }
                g.add_edge(a, b).map_err(|e| fail(e.to_string()))?;
            }
            YOp::DeleteVertex(v) => g.remove_vertex(v).map_err(|e| fail(e.to_string()))?,
            YOp::DeleteEdge(e) => g.remove_edge(e).map_err(|e| fail(e.to_string()))?,
            YOp::ContractEdge(e) => {
                g.contract_in_place(e, true).map_err(|e| fail(e.to_string()))?;
            }
        }
    }
    Ok(g)
}

/// Replays `cert` on `host` and compares with `target`: isomorphism when both
/// fit the isomorphism limit, otherwise containment of `target` as a subgraph.
pub fn verify_yminor_certificate(host: &MultiGraph, cert: &YCertificate, target: &MultiGraph) -> Result<(), CertError> {
    let result = replay_certificate(host, cert)?.compact().0;
    let target = target.compact().0;
    if result.vertex_count() <= ISO_VERTEX_LIMIT && target.vertex_count() <= ISO_VERTEX_LIMIT {
        return match is_isomorphic(&result, &target) {
            Ok(Some(_)) => Ok(()),
            Ok(None) => Err(CertError::Mismatch("not isomorphic".into())),
            Err(e) => Err(CertError::Mismatch(e.to_string())),
        };
    }
    match find_subgraph_embedding(&target, &result, 50_000_000) {
        Ok(Some(_)) => Ok(()),
        Ok(None) => Err(CertError::Mismatch("target is not a subgraph".into())),
        Err(_) => Err(CertError::Budget),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, reduce_to_k5_form, Family, FamilySpec};
    use crate::graph::named::*;

    #[test]
    fn empty_certificate_is_identity() {
        let g = petersen();
        assert_eq!(verify_yminor_certificate(&g, &YCertificate::default(), &g), Ok(()));
    }

    #[test]
    fn theta21_reduces_to_k5() {
        let inst = generate(&FamilySpec::new(Family::Theta2, 1)).unwrap();
        let r = reduce_to_k5_form(&inst).unwrap();
        assert_eq!(verify_yminor_certificate(&inst.graph, &r.certificate, &complete(5)), Ok(()));
    }

    #[test]
    fn degree_four_addition_rejected() {
        let g = complete(5);
        let cert = YCertificate {
            ops: vec![
                YOp::DeleteEdge(EdgeId(9)),
                YOp::AddEdge { v: VertexId(0), a: VertexId(1), b: VertexId(2) },
            ],
        };
        match replay_certificate(&g, &cert) {
            Err(CertError::Step { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected step failure, got {other:?}"),
        }
    }

    #[test]
    fn k33_to_k5_by_hand() {
        // a = 0..3, b = 3..6
        let g = complete_bipartite(3, 3);
        let cert = YCertificate::parse("add 5 0 1\nadd 2 3 4\nadd 2 4 5\nadd 2 3 5\ndelv 2\n").unwrap();
        assert_eq!(verify_yminor_certificate(&g, &cert, &complete(5)), Ok(()));
        assert_eq!(YCertificate::parse(&cert.to_text()).unwrap(), cert);
    }

    #[test]
    fn contraction_steps() {
        let cert = YCertificate { ops: vec![YOp::ContractEdge(EdgeId(0))] };
        assert_eq!(verify_yminor_certificate(&cycle(4), &cert, &complete(3)), Ok(()));
        assert!(verify_yminor_certificate(&cycle(4), &cert, &cycle(4)).is_err());
    }
}
