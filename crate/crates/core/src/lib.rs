//! Colored Erdős–Szekeres problems: SAT search over signotopes, exact
//! geometric verification and linear realization of point sets.

pub mod error;
pub mod geometry;
pub mod signotope;
pub mod spec;

pub use error::{Error, Result};
pub mod cnf;
pub mod driver;
pub mod encoder;
pub mod io;
pub mod localsearch;
pub mod minimize;
pub mod realize;
pub mod satcore;
