//! Numerics for the negativity of quantumness of two-mode Gaussian states and
//! the CNOT activation protocol.
//!
//! Conventions: `ħ = 1`, vacuum covariance `½·𝟙`, quadratures ordered
//! `(x₁, p₁, x₂, p₂, …)`.

pub mod activation;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod io;
pub mod linalg;
pub mod negativity;
pub mod special;

pub use error::{Error, Result};
