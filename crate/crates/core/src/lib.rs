//! Numerical laboratory for the nonautonomous reaction-diffusion inclusion
//!
//! ```text
//! u_t - u_xx ∈ b(t) H₀(u) + ω(t) u   on (0, 1),   u(0) = u(1) = 0,
//! ```
//!
//! where `H₀` is the Heaviside graph. The crate discretizes the inclusion with
//! an order-preserving semi-implicit scheme, realizes its maximal and minimal
//! solutions through extremal selections, and computes the extremal complete
//! trajectories and pullback-attractor samples as pullback limits.

// `!(x > 0.0)` is how parameters reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod equilibria;
pub mod error;
pub mod exec;
pub mod grid;
pub mod lab;
pub mod linalg;
pub mod solver;
pub mod verify;

pub use coefficients::{validate, CoefficientBounds, CoefficientProfile, Schedule};
pub use equilibria::EquilibriumParams;
pub use error::{LabError, Result};
pub use exec::Execution;
pub use grid::{GridFunction, GridSpec, OrderInterval};
pub use solver::{SelectionPolicy, Trajectory};
