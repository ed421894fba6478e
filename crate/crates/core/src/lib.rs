//! Tropical cycles, tropical currents and their intersection theory.

pub mod error;
pub mod lattice;
pub mod linalg;
pub mod polyhedra;
pub mod complexes;
pub mod troppoly;
pub mod intersect;
pub mod currents;
pub mod toric;
pub mod amoeba;
pub mod cli;

pub use error::{Error, Result};
