//! Direct and inverse spectral problems for a Dirac operator with a
//! rank-one non-local potential on `[0, pi]`.

pub mod charfun;
pub mod cli;
pub mod error;
pub mod generate;
pub mod inverse;
pub mod io;
pub mod potential;
pub mod quad;
pub mod spectrum;

pub use error::{Error, Result};
