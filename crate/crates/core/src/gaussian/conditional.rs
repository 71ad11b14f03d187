use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{symplectic_form, CovarianceMatrix};
use crate::error::{Error, Result};

/// State of the unmeasured modes after a Gaussian measurement on the others.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalGaussianState {
    /// `σ = B − Cᵀ (A + γ_m)⁻¹ C`, independent of the outcome.
    pub cm: CovarianceMatrix,
    /// `d_k = Cᵀ (A + γ_m)⁻¹ k`.
    pub mean: DVector<f64>,
}

/// Heterodyne measurement covariance `½·𝟙` on `modes` modes.
pub fn heterodyne(modes: usize) -> CovarianceMatrix {
    CovarianceMatrix::vacuum(modes)
}

struct Gain {
    sigma: DMatrix<f64>,
    /// `Cᵀ (A + γ_m)⁻¹`
    gain: DMatrix<f64>,
}

fn gain(cm: &CovarianceMatrix, measured: &[usize], meas_cm: &CovarianceMatrix) -> Result<Gain> {
    let (a, b, c) = cm.blocks(measured)?;
    if meas_cm.dim() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: meas_cm.dim(),
        });
    }
    let inv = (a + meas_cm.matrix())
        .try_inverse()
        .ok_or(Error::SingularMatrix("A + gamma_m"))?;
    let gain = c.transpose() * inv;
    let sigma = &b - &gain * &c;
    Ok(Gain {
        sigma: (&sigma + sigma.transpose()) * 0.5,
        gain,
    })
}

/// Conditional state of the complement of `measured_modes` given outcome `k`
/// of a Gaussian measurement with covariance `meas_cm`.
pub fn conditional_state(
    cm: &CovarianceMatrix,
    measured_modes: &[usize],
    meas_cm: &CovarianceMatrix,
    outcome: &DVector<f64>,
) -> Result<ConditionalGaussianState> {
    let g = gain(cm, measured_modes, meas_cm)?;
    if outcome.len() != g.gain.ncols() {
        return Err(Error::DimensionMismatch {
            expected: g.gain.ncols(),
            found: outcome.len(),
        });
    }
    Ok(ConditionalGaussianState {
        cm: CovarianceMatrix::new(g.sigma)?,
        mean: &g.gain * outcome,
    })
}

/// Characteristic function `C_kk'(ξ) = Tr{[ρ_{B|k}, ρ_{B|k'}] W(ξ)}` of the
/// commutator of two conditional states, `W(ξ) = exp(−i ξᵀ r)`:
///
/// ```text
/// C_kk'(ξ) = 2 exp[−¼ ξᵀ(σ + ¼ Ωᵀσ⁻¹Ω)ξ − ¼ Δᵀσ⁻¹Δ − (i/2) ξᵀ(d_k + d_k')]
///            / (2^M √det σ) · sinh[¼ (d_k' − d_k)ᵀ σ⁻¹ Ω ξ],   Δ = d_k − d_k'
/// ```
pub fn commutator_char_fn(
    cm: &CovarianceMatrix,
    measured_modes: &[usize],
    meas_cm: &CovarianceMatrix,
    outcome_k: &DVector<f64>,
    outcome_k2: &DVector<f64>,
    xi: &DVector<f64>,
) -> Result<Complex64> {
    let first = conditional_state(cm, measured_modes, meas_cm, outcome_k)?;
    let second = conditional_state(cm, measured_modes, meas_cm, outcome_k2)?;
    let sigma = first.cm.matrix();
    let m = first.cm.modes();
    if xi.len() != 2 * m {
        return Err(Error::DimensionMismatch {
            expected: 2 * m,
            found: xi.len(),
        });
    }
    let sigma_inv = sigma
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix("conditional covariance"))?;
    let omega = symplectic_form(m);
    let (dk, dk2) = (&first.mean, &second.mean);
    let delta = dk - dk2;

    let quad = sigma + omega.transpose() * &sigma_inv * &omega * 0.25;
    let re = -0.25 * (xi.transpose() * quad * xi)[(0, 0)]
        - 0.25 * (delta.transpose() * &sigma_inv * &delta)[(0, 0)];
    let im = -0.5 * xi.dot(&(dk + dk2));
    let arg = 0.25 * ((dk2 - dk).transpose() * &sigma_inv * &omega * xi)[(0, 0)];
    let prefactor = 2.0 / (2f64.powi(m as i32) * first.cm.det().sqrt());

    Ok(Complex64::new(re, im).exp() * (prefactor * arg.sinh()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::StandardFormParams;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn product_input_leaves_partner_untouched() {
        let cm = CovarianceMatrix::thermal(0.7)
            .unwrap()
            .direct_sum(&CovarianceMatrix::thermal(1.2).unwrap());
        let out = conditional_state(&cm, &[0], &heterodyne(1), &v(&[0.3, -2.0])).unwrap();
        assert_eq!(out.mean, v(&[0.0, 0.0]));
        assert_eq!(out.cm.matrix(), &(DMatrix::identity(2, 2) * 1.7));
    }

    #[test]
    fn coherent_mixture_heterodyne() {
        let cm = StandardFormParams::coherent_mixture(1.0)
            .assemble()
            .unwrap();
        let out = conditional_state(&cm, &[0], &heterodyne(1), &v(&[1.0, 0.0])).unwrap();
        assert!((out.cm.matrix() - DMatrix::identity(2, 2)).abs().max() < 1e-15);
        assert!((out.mean[0] - 0.5).abs() < 1e-15 && out.mean[1].abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_heterodyne_at_origin() {
        let cm = StandardFormParams::two_mode_squeezed_vacuum(0.5)
            .assemble()
            .unwrap();
        let out = conditional_state(&cm, &[0], &heterodyne(1), &v(&[0.0, 0.0])).unwrap();
        assert_eq!(out.mean, v(&[0.0, 0.0]));
        assert!(out.cm.symplectic_eigenvalues()[0] >= 0.5 - 1e-12);
        // σ = (ch − sh²/(ch + 1/2))·𝟙 with ch = cosh(1)/2, sh = sinh(1)/2
        let (ch, sh) = (1f64.cosh() / 2.0, 1f64.sinh() / 2.0);
        let expect = ch - sh * sh / (ch + 0.5);
        assert!((out.cm.matrix()[(0, 0)] - expect).abs() < 1e-14);
        assert!((out.cm.matrix()[(1, 1)] - expect).abs() < 1e-14);
    }

    #[test]
    fn commutator_vanishes_for_equal_outcomes() {
        let cm = StandardFormParams::coherent_mixture(1.0)
            .assemble()
            .unwrap();
        let k = v(&[0.4, -0.3]);
        let c = commutator_char_fn(&cm, &[0], &heterodyne(1), &k, &k, &v(&[0.2, 1.0])).unwrap();
        assert_eq!(c, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn commutator_nonzero_for_coherent_mixture() {
        let cm = StandardFormParams::coherent_mixture(1.0)
            .assemble()
            .unwrap();
        let c = commutator_char_fn(
            &cm,
            &[0],
            &heterodyne(1),
            &v(&[1.0, 0.0]),
            &v(&[0.0, 0.0]),
            &v(&[0.0, 1.0]),
        )
        .unwrap();
        assert!(c.norm() > 1e-3, "{c}");
    }

    #[test]
    fn outcome_length_checked() {
        let cm = CovarianceMatrix::vacuum(2);
        assert!(conditional_state(&cm, &[0], &heterodyne(1), &v(&[1.0])).is_err());
        assert!(conditional_state(&cm, &[0], &heterodyne(2), &v(&[1.0, 0.0])).is_err());
    }
}
