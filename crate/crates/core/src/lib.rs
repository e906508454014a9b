//! Quantum 6j-symbols at odd roots of unity, generalized hyperbolic tetrahedra and their
//! volumes, and the numerical machinery connecting the two.

mod eigen;
pub mod error;
pub mod qnum;
pub mod sixj;
pub mod gram;
pub mod tetra;
pub mod volfun;
pub mod growth;
pub mod graphs;

pub use error::{Error, Result};
