//! Finite graph covers on surfaces.
//!
//! Multigraphs with stable identities, rotation-system embeddings and Euler
//! genus, covering maps and permutation voltages, sum-Kuratowski families,
//! minor and Y-minor machinery, ply bounds and an exhaustive cover search.

pub mod embedding;
pub mod covers;
pub mod families;
pub mod graph;
pub mod minors;
pub mod search;
pub mod theorems;
