//! Cardinality constraints to CNF through generalized selection networks.

pub mod cli;
pub mod cnf;
pub mod constructions;
pub mod error;
pub mod io;
pub mod network;
pub mod verify;

pub use error::{Error, Result};
