//! Summary graphs, regression graphs and maximal ancestral graphs derived from
//! directed acyclic generating graphs, together with the edge-matrix operators
//! they are built from and a Gaussian linear-system oracle that checks them.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod confounding;
pub mod edge_matrix;
mod error;
pub mod gaussian_oracle;
pub mod generate;
pub mod graph_model;
mod mixed;
pub mod queries;
pub mod transform;

#[cfg(test)]
mod testutil;

pub use edge_matrix::{BinaryMatrix, NodeSubset, RealMatrix};
pub use error::{Error, Result};
pub use graph_model::{
    Classification, Edge, EdgeKind, EdgeList, Mag, NodeId, ParentGraph, SummaryGraph,
    ValidationReport,
};
pub use transform::{MarginalConditionSpec, SplitRecord};
