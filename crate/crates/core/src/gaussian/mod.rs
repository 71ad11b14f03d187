//! Covariance-matrix algebra for Gaussian states.
//!
//! Conventions: `ħ = 1`, vacuum covariance `½·𝟙`, quadratures ordered
//! `(x₁, p₁, …, x_L, p_L)` and `Ω = ⊕ (0 1; −1 0)`.

mod conditional;
mod covariance;
mod noise;
mod separability;
mod standard_form;
mod symplectic;

pub use conditional::{
    commutator_char_fn, conditional_state, heterodyne, ConditionalGaussianState,
};
pub use covariance::{symplectic_spectrum, CovarianceMatrix, CovarianceRecord};
pub use noise::{product_noise_compose, ProductNoiseDecomposition};
pub use separability::{
    is_classical, is_classical_with_tol, partial_transpose, ppt_across, ppt_separability,
    PptOutcome, Separability,
};
pub use standard_form::{
    assemble_standard_form, squeezing_for_mean_photons, standard_form_invariants,
    StandardFormParams,
};
pub use symplectic::{is_symplectic, SymplecticMap};

use nalgebra::DMatrix;

/// Tolerance for positive-semidefiniteness tests; eigenvalues in
/// `[-PSD_TOL, 0)` are treated as zero.
pub const PSD_TOL: f64 = 1e-10;

/// Entrywise tolerance of `SΩSᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Default tolerance on `‖C‖_max` when deciding classicality.
pub const CLASSICAL_TOL: f64 = 1e-10;

/// Standard symplectic form `Ω = ⊕ᵢ (0 1; −1 0)` on `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_squares_to_minus_identity() {
        for l in 1..4 {
            let w = symplectic_form(l);
            assert_eq!(&w * &w, -DMatrix::<f64>::identity(2 * l, 2 * l));
            assert_eq!(w.transpose(), -&w);
        }
    }
}
