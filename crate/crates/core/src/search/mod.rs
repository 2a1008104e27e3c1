//! Exhaustive, resumable enumeration of the p-fold covers of a connected
//! base graph, with planarity and genus filters.
//!
//! Covers are indexed by a mixed-radix number with one digit of base `p!`
//! per cotree edge (the first cotree edge is the least significant digit);
//! each digit selects a permutation in lexicographic order. Every p-fold
//! cover of a connected graph is isomorphic to one of these.

mod checkpoint;
mod toy;

pub use checkpoint::Checkpoint;
pub use toy::{connected_graphs, covers_graph, decide_toy, ToyHit, ToyReport};

use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::covers::{cotree_edges, derived_cover, permutation_from_index, CoverError, CoverMap, VoltageAssignment};
use crate::embedding::{is_planar_fast, min_euler_genus_with, EmbeddingError, GenusOptions};
use crate::graph::io::write_graph;
use crate::graph::{connected_components, is_connected, EdgeId, GraphError, MultiGraph};

/// Largest index space a single search accepts.
pub const MAX_INDEX_SPACE: u128 = 1_000_000_000;
/// Indices processed between checkpoint writes.
pub const CHECKPOINT_INTERVAL: u64 = 4096;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("index space of {size} covers exceeds the limit of {limit}; shard the range")]
    TooLarge { size: u128, limit: u128 },
    #[error("base graph must be connected and non-empty")]
    Disconnected,
    #[error("ply must be at least 1")]
    ZeroPly,
    #[error("range {lo}..{hi} is outside the index space of size {size}")]
    BadRange { lo: u64, hi: u64, size: u64 },
    #[error("checkpoint belongs to spec {found}, expected {expected}")]
    DigestMismatch { expected: String, found: String },
    #[error("checkpoint line {line}: {msg}")]
    Checkpoint { line: usize, msg: String },
    #[error("genus of cover {index} undecided within the trace budget")]
    Inconclusive { index: u64 },
    #[error("toy enumeration supports at most 10 vertices, got {0}")]
    TooManyVertices(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filter {
    Planar,
    /// Total Euler genus (summed over components) at most this value.
    GenusAtMost(usize),
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::Planar => write!(f, "planar"),
            Filter::GenusAtMost(g) => write!(f, "genus<={g}"),
        }
    }
}

impl std::str::FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "planar" {
            return Ok(Filter::Planar);
        }
        s.strip_prefix("genus<=")
            .or_else(|| s.strip_prefix("genus="))
            .and_then(|g| g.parse().ok())
            .map(Filter::GenusAtMost)
            .ok_or_else(|| format!("unknown filter `{s}` (expected planar or genus<=G)"))
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub base: MultiGraph,
    pub ply: usize,
    pub cotree: Vec<EdgeId>,
    pub filter: Filter,
    pub lo: u64,
    pub hi: u64,
}

impl SearchSpec {
    /// The full index space of `base` at ply `p`.
    pub fn new(base: MultiGraph, ply: usize, filter: Filter) -> Result<Self, SearchError> {
        if ply == 0 {
            return Err(SearchError::ZeroPly);
        }
        if base.vertex_count() == 0 || !is_connected(&base) {
            return Err(SearchError::Disconnected);
        }
        let cotree = cotree_edges(&base);
        let radix: u128 = (1..=ply as u128).product();
        let mut size: u128 = 1;
        for _ in &cotree {
            size = size.saturating_mul(radix);
            if size > MAX_INDEX_SPACE {
                return Err(SearchError::TooLarge { size, limit: MAX_INDEX_SPACE });
            }
        }
        Ok(SearchSpec { base, ply, cotree, filter, lo: 0, hi: size as u64 })
    }

    /// Restricts the search to `[lo, hi)`, for sharding.
    pub fn with_range(mut self, lo: u64, hi: u64) -> Result<Self, SearchError> {
        let size = self.size();
        if lo > hi || hi > size {
            return Err(SearchError::BadRange { lo, hi, size });
        }
        self.lo = lo;
        self.hi = hi;
        Ok(self)
    }

    pub fn size(&self) -> u64 {
        let radix: u64 = (1..=self.ply as u64).product();
        radix.pow(self.cotree.len() as u32)
    }

    pub fn voltage(&self, index: u64) -> VoltageAssignment {
        let radix: u64 = (1..=self.ply as u64).product();
        let mut va = VoltageAssignment::identity(self.base.clone(), self.ply);
        let mut rest = index;
        for &e in &self.cotree {
            va.set(e, permutation_from_index(self.ply, rest % radix)).expect("valid permutation");
            rest /= radix;
        }
        va
    }

    pub fn cover(&self, index: u64) -> CoverMap {
        derived_cover(&self.voltage(index))
    }

    /// Hex SHA-256 of the base, ply, cotree order and filter. The range is
    /// left out so shards of one search share a digest.
    pub fn digest(&self) -> String {
        let cotree: Vec<String> = self.cotree.iter().map(|e| e.0.to_string()).collect();
        let text = format!("{}ply {}\ncotree {}\nfilter {}\n", write_graph(&self.base), self.ply, cotree.join(" "), self.filter);
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn verdict(&self, index: u64, cover: &MultiGraph) -> Result<bool, SearchError> {
        match self.filter {
            Filter::Planar => Ok(is_planar_fast(cover)),
            Filter::GenusAtMost(g) => {
                let (mut upper, mut lower) = (0, 0);
                for comp in connected_components(cover) {
                    let part = cover.induced(&comp.into_iter().collect());
                    let r = min_euler_genus_with(&part, &GenusOptions::default())?;
                    upper += r.genus;
                    lower += r.lower_bound;
                }
                if upper <= g {
                    Ok(true)
                } else if lower > g {
                    Ok(false)
                } else {
                    Err(SearchError::Inconclusive { index })
                }
            }
        }
    }
}

/// Covers in the spec's range, in index order, with their filter verdicts.
pub fn enumerate_covers(spec: &SearchSpec) -> impl Iterator<Item = (u64, CoverMap, Result<bool, SearchError>)> + '_ {
    (spec.lo..spec.hi).map(move |i| {
        let c = spec.cover(i);
        let v = spec.verdict(i, &c.cover);
        (i, c, v)
    })
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Checkpoint file, read on start and rewritten every interval.
    pub checkpoint: Option<PathBuf>,
    /// Stop after checking this many new indices.
    pub stop_after: Option<u64>,
    /// Stop at the end of the first interval that produced a hit.
    pub first_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Indices of the range done so far, including earlier runs.
    pub checked: u64,
    pub hits: Vec<u64>,
    pub complete: bool,
    pub checkpoint: Checkpoint,
}

/// Runs or resumes a search. Each interval is checked in parallel; the
/// result does not depend on the worker count.
pub fn run_search(spec: &SearchSpec, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let digest = spec.digest();
    let mut cp = match &opts.checkpoint {
        Some(path) => Checkpoint::load(path)?.unwrap_or_else(|| Checkpoint::new(digest.clone())),
        None => Checkpoint::new(digest.clone()),
    };
    if cp.digest != digest {
        return Err(SearchError::DigestMismatch { expected: digest, found: cp.digest });
    }
    let pool = match opts.jobs {
        Some(j) => Some(rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build().map_err(std::io::Error::other)?),
        None => None,
    };
    let mut budget = opts.stop_after.unwrap_or(u64::MAX);
    'outer: for (lo, hi) in cp.pending(spec.lo, spec.hi) {
        let mut at = lo;
        while at < hi {
            if budget == 0 {
                break 'outer;
            }
            let end = hi.min(at + CHECKPOINT_INTERVAL).min(at.saturating_add(budget));
            let check = || -> Result<Vec<u64>, SearchError> {
                let verdicts: Vec<Result<bool, SearchError>> =
                    (at..end).into_par_iter().map(|i| spec.verdict(i, &spec.cover(i).cover)).collect();
                let mut hits = Vec::new();
                for (i, v) in (at..end).zip(verdicts) {
                    if v? {
                        hits.push(i);
                    }
                }
                Ok(hits)
            };
            let hits = match &pool {
                Some(p) => p.install(check)?,
                None => check()?,
            };
            let found = !hits.is_empty();
            cp.hits.extend(hits);
            cp.mark_done(at, end);
            if let Some(path) = &opts.checkpoint {
                cp.save(path)?;
            }
            budget -= end - at;
            at = end;
            if found && opts.first_hit {
                break 'outer;
            }
        }
    }
    let checked = cp.covered(spec.lo, spec.hi);
    let hits = cp.hits.range(spec.lo..spec.hi).copied().collect();
    Ok(SearchOutcome { checked, hits, complete: checked == spec.hi - spec.lo, checkpoint: cp })
}

#[derive(Clone, Debug)]
pub enum PlanarCoverSearch {
    Witness { index: u64, cover: CoverMap },
    /// Every index was checked and none gave a planar cover.
    Exhausted { checked: u64 },
    /// Stopped early without a hit.
    Interrupted { checked: u64 },
}

/// Looks for a planar p-fold cover of `g`, connected or not.
pub fn exists_planar_cover(g: &MultiGraph, p: usize, opts: &SearchOptions) -> Result<PlanarCoverSearch, SearchError> {
    let spec = SearchSpec::new(g.clone(), p, Filter::Planar)?;
    let out = run_search(&spec, &SearchOptions { first_hit: true, ..opts.clone() })?;
    match out.hits.first() {
        Some(&index) => Ok(PlanarCoverSearch::Witness { index, cover: spec.cover(index) }),
        None if out.complete => Ok(PlanarCoverSearch::Exhausted { checked: out.checked }),
        None => Ok(PlanarCoverSearch::Interrupted { checked: out.checked }),
    }
}
