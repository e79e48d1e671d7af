//! Residual connectedness reliability (RCR) of graphs.
//!
//! Every vertex of a connected graph is independently *up* with probability
//! `p`; the RCR is the probability that the up vertices induce a non-empty
//! connected subgraph. The crate provides
//!
//! * [`graph`]: graphs, hop metric, induced connectivity, cut vertices and blocks;
//! * [`chain`]: the radius-indexed level process used by the splitting estimators;
//! * [`estimators`]: crude, conditional, recursive variance reduction, fixed
//!   splitting, final-level importance sampling, block-factorized SIS and SIR;
//! * [`exact`]: brute-force and transfer-matrix counts of connected induced
//!   subgraphs, exact rational reliability and the `p*` fixed point;
//! * [`harness`]: replicated experiments, RE/WNRV summaries, bootstrap intervals,
//!   CSV and SVG output.
//!
//! Run `cargo run --example <name>` for a tour; see `examples/`.

pub mod chain;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod rng;

pub use error::{RcrError, Result};
pub use graph::{DistanceMatrix, Graph, VertexId, VertexSet};
