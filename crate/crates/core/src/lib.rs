//! Symbolic dynamics and transfer operators for Schottky groups.

pub mod cli;
pub mod coding;
pub mod correlation;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod spectral;
pub mod transfer;

pub use error::{Error, Result};
