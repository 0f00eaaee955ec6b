//! Exact arithmetic and geometry for modular stitch graphs, planet dances,
//! their torus lines, overlay decompositions and cycloid envelopes.

pub mod cli;
pub mod cycloid;
pub mod dances;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod overlay;
pub mod render;
pub mod torusgeo;

pub use error::{Error, Result};
