//! Explicit spanning triangulations of a k-gon and the tooling around them:
//! exhaustive inequality checks on fragments and cycles, exact spread
//! counts on tiny instances, and G(n,p) containment simulation.

pub mod construct;
pub mod cycles;
pub mod edgeset;
pub mod error;
pub mod fragments;
pub mod graph;
pub mod sim;
pub mod spread;
pub mod verify;

pub use construct::{auto_construct, construct, select_regime, ConstructionParams};
pub use error::{Error, Result};
pub use graph::{faces, validate, Regime, Triangulation, ValidationReport, Vertex};
