//! Spectral gaps of periodic quantum graphs with point interactions.
//!
//! - [`diophantine`]: continued fractions, best approximations, Markov constants
//! - [`lattice`]: the rectangular lattice with a delta coupling at the vertices
//! - [`floquet`]: secular determinants of general periodic graphs

pub mod diophantine;
pub mod error;
pub mod floquet;
pub mod interval;
pub mod lattice;

pub use error::{Error, ErrorKind, Result};
pub use interval::RealInterval;
