pub mod action;
pub mod catalog;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod graph;
pub mod groebner;
pub mod lattice;
pub mod monomial;
pub mod simplicity;
pub mod smooth;
pub mod torus;

pub use error::{Error, Result};
