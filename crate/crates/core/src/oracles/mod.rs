//! Exact, enumeration-based reference oracles: image membership, exact
//! Avoid, and the minimum circuit size problem (plain and with oracle gates).
//! Everything here is ground truth; nothing is sampled.

mod image;
pub mod mcsp;

pub use image::{
    exact_avoid, exact_avoid_with_cap, image_contains, image_contains_with_cap, ImageProfile,
    DEFAULT_ENUMERATION_CAP,
};
pub use mcsp::{
    mcsp_decide, min_circuit_size, parse_oracle_file, shannon_circuit, Basis, McspLimits, McspQuery,
    McspSolver, OracleFun,
};
