//! Euler-formula edge bounds, ply bounds for covers of the path, theta and
//! star families, and validators that check embedded covers against them.

mod facial;
mod validate;

pub use facial::{add_triangle_edge_embedded, normalize_facial_triangles, FacialRewrite};
pub use validate::{embedding_genus, validate_embedded_cover, ValidationReport};

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::covers::CoverError;
use crate::embedding::EmbeddingError;
use crate::families::Family;
use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("edge bound needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("unknown bound family `{0}` (expected k3k, omega1, theta1, pi1 or any)")]
    UnknownFamily(String),
    #[error("cover and embedding do not match: {0}")]
    Mismatch(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("contradiction with a proved bound: {0}")]
    Contradiction(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Maximum number of edges of a simple graph on `n` vertices embedded with
/// Euler genus `g`: `3n - 6 + 3g`, or `2n - 4 + 2g` if it is bipartite.
pub fn euler_edge_bound(n: usize, g: usize, bipartite: bool) -> Result<usize, TheoremError> {
    if n < 3 {
        return Err(TheoremError::TooFewVertices(n));
    }
    Ok(if bipartite { 2 * n - 4 + 2 * g } else { 3 * n - 6 + 3 * g })
}

/// Number of non-contractible lifted components an embedded cover can have.
pub fn noncontractible_budget(g: usize) -> usize {
    6 * g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundFamily {
    K3k,
    Omega1,
    Theta1,
    Pi1,
    /// The bound valid for every family once `k >= 25`.
    Any,
}

impl BoundFamily {
    /// `(numerator coefficient, offset, smallest k)`: the bound is
    /// `coef * g / (k - offset)` for `k >= smallest k`.
    fn shape(self) -> (i64, i64, usize) {
        match self {
            BoundFamily::K3k => (2, 6, 7),
            BoundFamily::Omega1 => (28, 4, 5),
            BoundFamily::Theta1 => (28, 8, 9),
            BoundFamily::Pi1 | BoundFamily::Any => (28, 24, 25),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            BoundFamily::K3k => "k3k",
            BoundFamily::Omega1 => "omega1",
            BoundFamily::Theta1 => "theta1",
            BoundFamily::Pi1 => "pi1",
            BoundFamily::Any => "any",
        }
    }

    /// The bound that applies to a generated family. Families built from
    /// K3,3 copies contain the matching K5 family as a Y-minor and only get
    /// the combined bound.
    pub fn for_family(f: Family) -> BoundFamily {
        match f {
            Family::K3k => BoundFamily::K3k,
            Family::Omega1 => BoundFamily::Omega1,
            Family::Theta1 => BoundFamily::Theta1,
            Family::Pi1 => BoundFamily::Pi1,
            _ => BoundFamily::Any,
        }
    }
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundFamily {
    type Err = TheoremError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k3k" | "k3" => Ok(BoundFamily::K3k),
            "omega1" => Ok(BoundFamily::Omega1),
            "theta1" => Ok(BoundFamily::Theta1),
            "pi1" => Ok(BoundFamily::Pi1),
            "any" => Ok(BoundFamily::Any),
            _ => Err(TheoremError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlyBound {
    pub family: BoundFamily,
    pub k: usize,
    pub genus: usize,
    /// `None` when `k` is below the range where the bound is proved.
    pub value: Option<Ratio<i64>>,
}

impl PlyBound {
    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }

    /// Largest ply the bound allows.
    pub fn floor(&self) -> Option<i64> {
        self.value.map(|v| v.floor().to_integer())
    }

    /// True when the bound rules out every finite cover embedded with this genus.
    pub fn excludes_all_covers(&self) -> bool {
        self.floor().is_some_and(|f| f < 1)
    }

    pub fn allows(&self, ply: usize) -> bool {
        self.floor().is_none_or(|f| ply as i64 <= f)
    }
}

impl fmt::Display for PlyBound {
    /// `<num>/<den> floor=<n> applicable=<bool>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{}/{} floor={} applicable=true", v.numer(), v.denom(), self.floor().unwrap()),
            None => write!(f, "none floor=none applicable=false"),
        }
    }
}

pub fn ply_bound(family: BoundFamily, k: usize, genus: usize) -> PlyBound {
    let (coef, offset, min_k) = family.shape();
    let value = (k >= min_k).then(|| Ratio::new(coef * genus as i64, k as i64 - offset));
    PlyBound { family, k, genus, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_bounds() {
        assert_eq!(euler_edge_bound(4, 0, false), Ok(6));
        assert_eq!(euler_edge_bound(6, 0, true), Ok(8));
        assert_eq!(euler_edge_bound(5, 1, false), Ok(12));
        assert_eq!(euler_edge_bound(2, 0, false), Err(TheoremError::TooFewVertices(2)));
        assert_eq!(noncontractible_budget(0), 0);
        assert_eq!(noncontractible_budget(1), 6);
        assert_eq!(noncontractible_budget(2), 12);
    }

    #[test]
    fn bound_table() {
        let b = ply_bound(BoundFamily::K3k, 7, 1);
        assert_eq!(b.value, Some(Ratio::from_integer(2)));
        assert_eq!(b.to_string(), "2/1 floor=2 applicable=true");
        assert_eq!(ply_bound(BoundFamily::Omega1, 32, 1).floor(), Some(1));
        assert_eq!(ply_bound(BoundFamily::Theta1, 36, 1).floor(), Some(1));
        assert_eq!(ply_bound(BoundFamily::Pi1, 52, 1).floor(), Some(1));
        let b = ply_bound(BoundFamily::Pi1, 53, 1);
        assert_eq!(b.value, Some(Ratio::new(28, 29)));
        assert!(b.excludes_all_covers());
        assert!(!ply_bound(BoundFamily::Pi1, 24, 1).applicable());
        assert_eq!(ply_bound(BoundFamily::Omega1, 4, 3).to_string(), "none floor=none applicable=false");
        assert_eq!("k3".parse::<BoundFamily>(), Ok(BoundFamily::K3k));
        assert!("sigma".parse::<BoundFamily>().is_err());
    }

    proptest! {
        #[test]
        fn bounds_fall_in_k_and_grow_in_g(fam in 0usize..5, k in 25usize..400, g in 1usize..50) {
            let family = [BoundFamily::K3k, BoundFamily::Omega1, BoundFamily::Theta1, BoundFamily::Pi1, BoundFamily::Any][fam];
            let b = ply_bound(family, k, g).value.unwrap();
            prop_assert!(ply_bound(family, k + 1, g).value.unwrap() < b);
            prop_assert!(ply_bound(family, k, g + 1).value.unwrap() > b);
            prop_assert_eq!(ply_bound(family, k, 2 * g).value.unwrap(), b * 2);
            // tends to zero: far enough out, no cover survives
            prop_assert!(ply_bound(family, 100 * k * g, g).excludes_all_covers());
        }

        #[test]
        fn embeddings_respect_edge_bound(n in 3usize..9, mask in any::<u64>(), seed in any::<u64>()) {
            let mut g = crate::graph::MultiGraph::with_vertices(n);
            let mut bit = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if mask >> (bit % 64) & 1 == 1 {
                        g.add_edge(crate::graph::VertexId(u), crate::graph::VertexId(v)).unwrap();
                    }
                    bit += 1;
                }
            }
            let eg = crate::embedding::tests_support::random_embedding(g.clone(), seed);
            let bip = crate::graph::bipartition(&g).is_bipartite();
            prop_assert!(g.edge_count() <= euler_edge_bound(n, embedding_genus(&eg), bip).unwrap());
        }
    }
}
