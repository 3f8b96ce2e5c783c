//! Graph documents and the `sumgraph` command line.

pub mod commands;
pub mod document;

pub use commands::{run, Cli, Outcome};
pub use document::{emit_document, emit_parent, emit_summary, parse_graph, DocumentError, Graph, GraphDocument};
