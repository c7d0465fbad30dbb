//! Range Avoidance through circuit inversion.
//!
//! Given `C: {0,1}ⁿ → {0,1}ᵐ` with `m > n`, [`avoid::solve_avoid`] samples
//! uniform strings `y` and returns the first one that an inverter fails to
//! invert. The inverter contract lives in [`inverters`]; [`oracles`] holds the
//! exact enumeration-based ground truth (image membership, exact Avoid,
//! minimum circuit size); [`lab`] measures the probabilities involved, both
//! exactly and by Monte Carlo.

pub mod avoid;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod inverters;
pub mod lab;
pub mod oracles;
pub mod seed;

pub use circuit::{BitString, Circuit, TruthTable};
pub use error::{CapacityError, Error, Result};
