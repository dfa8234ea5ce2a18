//! Labelling schemes and randomized sketches for graph adjacency, small
//! distances and approximate distance thresholds.
//!
//! The crate is organised by what each module builds:
//!
//! - [`graph`]: the immutable [`Graph`] type, exact BFS metrics, generators
//!   and the subdivision / binary-tree gadget constructions.
//! - [`eqlabel`]: equality-based labels, their decoders, the hash compiler
//!   that turns them into sketches, evaluation and JSON dumps.
//! - [`adjacency`]: degeneracy-orientation and connection-model adjacency
//!   labels.
//! - [`smalldist`]: weak reachability, exact distance-`r` labels and the
//!   BFS-layered variant.
//! - [`adt`]: sparse covers, padded partitions and the approximate distance
//!   threshold schemes built from them.
//! - [`bounds`]: exhaustive verifiers and calculators for the lower-bound
//!   constructions.

pub mod adjacency;
pub mod adt;
pub mod bits;
pub mod bounds;
pub mod eqlabel;
mod error;
pub mod graph;
pub mod rng;
pub mod smalldist;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{DistRow, Graph, Vertex};
