//! Thermal entanglement of Ising spin chains with Dzialoshinski-Moriya (DM)
//! interaction.
//!
//! The crate builds the Hamiltonians of two two-qubit models (field and DM
//! vector along the Ising axis, or both transverse to it), forms their Gibbs
//! states, and measures entanglement with the negativity of the partial
//! transpose. The longitudinal model has closed-form thermal elements; every
//! closed-form quantity also has an independent numerical route so the two
//! can be checked against each other.
//!
//! Temperatures are in energy units (Boltzmann constant set to 1).

pub mod chain;
pub mod entanglement;
pub mod error;
pub mod models;
pub mod qlinalg;
pub mod sweep;
pub mod thermal;

pub use error::{Error, Result};
pub use num_complex::Complex64;
