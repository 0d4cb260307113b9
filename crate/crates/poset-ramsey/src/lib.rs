//! Executable extremal poset theory on small Boolean lattices.
//!
//! The crate turns the classical machinery around the poset Ramsey number
//! `R(A_t, Q_n)` — the least `N` such that every blue/red coloring of `Q_N`
//! contains a blue antichain of size `t` or a red copy of the Boolean
//! lattice `Q_n` — into verified, certificate-producing code:
//!
//! - [`lattice`]: bitmask vertex sets, colorings (with a bit-exact JSON/hex
//!   file format), chains, antichains, layers, monochromatic heights.
//! - [`chains`]: symmetric chain decomposition by bracket matching, Dilworth
//!   minimum chain covers with the dual maximum antichain (König), full
//!   chains and their linear orderings.
//! - [`sequences`]: longest monotone subsequences, common undirected
//!   subsequences of two permutations, and consistently ordered triples
//!   across many orderings.
//! - [`embeddings`]: cube copies in canonical monotone-tail form — search,
//!   verification, canonicalization, the chain-or-cube dichotomy, and a
//!   brute-force counting oracle.
//! - [`constructions`]: the extremal lower-bound colorings with
//!   certificate-producing verifiers, plus closed-form bound calculators
//!   (Sperner numbers, layered lower bounds, exact regimes).
//! - [`search`]: pruned exhaustive search for escaping colorings with orbit
//!   symmetry reduction, exact small Ramsey numbers, and the constructive
//!   red-cube extraction pipeline.
//!
//! # Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example constructions
//! cargo run --release --example ramsey_small
//! cargo run --release --example extract_red_cube
//! cargo run --release --example symmetric_chains
//! cargo run --release --example dilworth_cover
//! cargo run --release --example monotone_sequences
//! cargo run --release --example bounds_table
//! ```
//!
//! The `poset-ramsey` binary exposes the same functionality as subcommands
//! (`construct`, `verify`, `search`, `pipeline`, `tools`); see the README.

pub mod chains;
pub mod cli;
pub mod constructions;
pub mod embeddings;
pub mod error;
pub mod lattice;
pub mod search;
pub mod sequences;

pub use error::{Error, Result};
pub use lattice::{Antichain, Chain, Color, LatticeColoring, VertexSet};
