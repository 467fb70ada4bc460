//! Numerical core for thermal cluster states.
//!
//! Builds graph states and their parent Hamiltonians, produces thermal
//! states both by Gibbs exponentiation and by local dephasing of the ground
//! state, and analyzes them: negativities and the free / bound / PPT
//! regimes, simulated product-projector tomography, and measurement-based
//! single-qubit state preparation.
//!
//! The crate is `no_std` and needs only `alloc`. All randomness comes from
//! explicitly seeded generators.
#![no_std]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod mbqc;
pub mod thermal;
pub mod tomography;

pub use error::{Error, Result};
pub use graph::{linear_graph, Graph};
pub use linalg::{ComplexMatrix, DensityMatrix, PureState, C64};
