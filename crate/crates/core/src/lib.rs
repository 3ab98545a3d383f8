//! Hierarchical clustering under Dasgupta-style costs.

pub mod cost;
pub mod cut;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
mod lp;
pub mod rounding;
pub mod rsc;
pub mod sdp;
pub mod spreading;
pub mod tree;

pub use error::{ErrorKind, HcError, Result};
pub use graph::Graph;
pub use tree::ClusterTree;
