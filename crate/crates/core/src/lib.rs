//! Computational machinery for Ramsey graph censuses: bitset graphs,
//! canonical labelling, one-vertex and cone-gluing generation, the excess
//! identity, pointed-graph gluing problems and their SAT encoding.

pub mod analysis;
pub mod canon;
pub mod catalog;
pub mod census;
pub mod error;
pub mod glue;
pub mod graph;
pub mod graph6;
pub mod sat;

pub use error::{Error, Result};
pub use graph::{Graph, RamseyType};
