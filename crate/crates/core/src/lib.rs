//! Graph products, tree decompositions and separators for subgraphs of
//! products, localising sets, strong colouring numbers, shortcut systems
//! and unit-disc embeddings.

pub mod bounds;
pub mod colouring;
pub mod decomposition;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod growth;
pub mod io;
pub mod localise;
pub mod product;
pub mod separators;
pub mod shortcuts;
pub mod testgen;

pub use error::{Error, Result};
pub use graph::Graph;
