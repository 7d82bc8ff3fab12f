//! Quasi-kernels of small digraphs: exact solvers, constructions from
//! kernel-perfect partitions, reductions between conjecture variants and a
//! sweep harness that checks the conjectured bounds exhaustively.
//!
//! Digraphs have at most 63 vertices so that a vertex set is one `u64`.

pub mod alpha;
pub mod cli;
pub mod digraph;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod generators;
pub mod harness;
pub mod reductions;
pub mod solvers;
pub mod theorems;

pub use alpha::RationalAlpha;
pub use digraph::{Digraph, Distance, PartKind, Partition, VertexSet, MAX_VERTICES};
pub use error::{Error, Result};
pub use solvers::SolveResult;
