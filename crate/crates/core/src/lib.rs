//! Max-of-affine networks that are exact viscosity solutions of first-order
//! Hamilton–Jacobi equations, together with the linear programs that recover
//! their initial data and Hamiltonian, 1D entropy-solution machinery,
//! independent numerical oracles, and an Adam-based parameter recovery loop.
//!
//! The network is
//!
//! ```text
//! f(x, t) = max_i { <p_i, x> - t * theta_i - gamma_i }
//! ```
//!
//! and every public operation is a pure function of immutable inputs.

// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conservation;
pub mod convex;
pub mod error;
pub mod io;
pub mod lp;
pub mod network;
pub mod oracle;
pub mod par;
pub mod presets;
pub mod rng;
pub mod training;

pub use error::{HjError, Result};
pub use network::{NetworkParams, QueryPoint, Subdifferential, TieRule};
pub use par::Exec;
