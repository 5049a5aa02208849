//! Constructions, exact search and certificate checking for counterexamples
//! to the multiplicativity of small complete graphs under the tensor product.

pub mod bitset;
pub mod constructions;
pub mod counterexample;
pub mod dimacs;
pub mod error;
pub mod graph;
pub mod iso;
pub mod solver;
pub mod widecolor;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::Graph;
