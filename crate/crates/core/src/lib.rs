//! Compile classical amplitude vectors into state-preparation circuits.
//!
//! Pipeline: [`amplitudes`] validates input, [`trees`] builds the state and
//! angle trees, [`synthesis`] walks the angle tree into a [`circuit::Circuit`],
//! [`simulator`] verifies it and [`analysis`] predicts and measures resources.

pub mod amplitudes;
pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod simulator;
pub mod synthesis;
pub mod trees;

pub use error::{Error, Result};
