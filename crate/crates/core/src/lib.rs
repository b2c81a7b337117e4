//! Certified arithmetic and combinatorics for Sturmian words, continued fractions,
//! heights and contracted rotations.

pub mod cli;
pub mod confrac;
pub mod error;
pub mod evalnum;
pub mod heights;
pub mod kernel;
pub mod rotor;
pub mod serial;
pub mod stutter;
pub mod words;

pub use error::{Error, Result};
