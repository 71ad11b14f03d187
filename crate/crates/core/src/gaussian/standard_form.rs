use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::{CovarianceMatrix, PSD_TOL};
use crate::error::{Error, Result};

/// Parameters `(a, b, c1, c2)` of the two-mode standard form
/// `A = diag(a, a)`, `B = diag(b, b)`, `C = diag(c1, c2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormParams {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

impl StandardFormParams {
    pub fn new(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        Self { a, b, c1, c2 }
    }

    /// Two-mode squeezed vacuum with squeezing `r`.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        Self::new(ch, ch, sh, -sh)
    }

    /// Two-mode squeezed vacuum with local mean photon number `⟨n⟩ = sinh²r`.
    pub fn pure_with_mean_photons(nbar: f64) -> Self {
        Self::two_mode_squeezed_vacuum(squeezing_for_mean_photons(nbar))
    }

    /// Unbiased Gaussian mixture of coherent states `|α⟩|α⟩` with variance
    /// `σ²` of the P-function; local mean photon number is `σ²`.
    pub fn coherent_mixture(sigma2: f64) -> Self {
        Self::new(sigma2 + 0.5, sigma2 + 0.5, sigma2, sigma2)
    }

    pub fn assemble(&self) -> Result<CovarianceMatrix> {
        assemble_standard_form(self)
    }
}

/// `r` such that `sinh²r = nbar`.
pub fn squeezing_for_mean_photons(nbar: f64) -> f64 {
    nbar.max(0.0).sqrt().asinh()
}

pub fn assemble_standard_form(p: &StandardFormParams) -> Result<CovarianceMatrix> {
    let StandardFormParams { a, b, c1, c2 } = *p;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        a, 0.0, c1, 0.0,
        0.0, a, 0.0, c2,
        c1, 0.0, b, 0.0,
        0.0, c2, 0.0, b,
    ]);
    CovarianceMatrix::new(m)
}

/// Standard-form parameters of a two-mode covariance matrix.
///
/// Each local block is brought to `√det·𝟙` by the symplectic `√det · X^{-1/2}`
/// and the transformed correlation block is diagonalised by local rotations.
/// The result shares `det A`, `det B`, `det C` and `det γ` with the input and
/// uses the sign convention `c1 ≥ |c2|`.
pub fn standard_form_invariants(cm: &CovarianceMatrix) -> Result<StandardFormParams> {
    if cm.modes() != 2 {
        return Err(Error::NotTwoModes(cm.modes()));
    }
    let m = cm.matrix();
    let block = |r: usize, c: usize| {
        Matrix2::new(m[(r, c)], m[(r, c + 1)], m[(r + 1, c)], m[(r + 1, c + 1)])
    };
    let (a_blk, b_blk, c_blk) = (block(0, 0), block(2, 2), block(0, 2));

    let (det_a, det_b) = (a_blk.determinant(), b_blk.determinant());
    for det in [det_a, det_b] {
        if det < 0.25 - PSD_TOL {
            return Err(Error::DegenerateBlock { det });
        }
    }
    let normalize_a = local_normalizer(&a_blk, det_a)?;
    let normalize_b = local_normalizer(&b_blk, det_b)?;
    let c = normalize_a * c_blk * normalize_b.transpose();

    // signed singular values under SO(2)×SO(2): c1 = (p+q)/2, c2 = (p−q)/2
    let p = (c[(0, 0)] + c[(1, 1)]).hypot(c[(0, 1)] - c[(1, 0)]);
    let q = (c[(0, 0)] - c[(1, 1)]).hypot(c[(0, 1)] + c[(1, 0)]);
    Ok(StandardFormParams {
        a: det_a.sqrt(),
        b: det_b.sqrt(),
        c1: 0.5 * (p + q),
        c2: 0.5 * (p - q),
    })
}

/// Symplectic `√δ · X^{-1/2}` mapping the 2×2 block `X` to `√δ·𝟙`.
fn local_normalizer(x: &Matrix2<f64>, det: f64) -> Result<Matrix2<f64>> {
    let sd = det.sqrt();
    let root = (x + Matrix2::identity() * sd) / (x.trace() + 2.0 * sd).sqrt();
    let inv = root
        .try_inverse()
        .ok_or(Error::SingularMatrix("local block square root"))?;
    Ok(inv * sd.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::SymplecticMap;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vacuum_params() {
        let cm = StandardFormParams::new(0.5, 0.5, 0.0, 0.0)
            .assemble()
            .unwrap();
        assert_eq!(cm, CovarianceMatrix::vacuum(2));
        let p = standard_form_invariants(&cm).unwrap();
        assert_eq!((p.a, p.b, p.c1, p.c2), (0.5, 0.5, 0.0, 0.0));
    }

    #[test]
    fn coherent_mixture_cm() {
        let cm = StandardFormParams::coherent_mixture(1.0)
            .assemble()
            .unwrap();
        let m = cm.matrix();
        assert_eq!(m[(0, 0)], 1.5);
        assert_eq!(m[(3, 3)], 1.5);
        assert_eq!(m[(0, 2)], 1.0);
        assert_eq!(m[(1, 3)], 1.0);
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        let cm = StandardFormParams::two_mode_squeezed_vacuum(0.5)
            .assemble()
            .unwrap();
        for nu in cm.symplectic_eigenvalues() {
            assert!(close(nu, 0.5, 1e-12), "{nu}");
        }
    }

    #[test]
    fn unphysical_params_rejected() {
        assert!(matches!(
            StandardFormParams::new(0.5, 0.5, 0.3, 0.3).assemble(),
            Err(Error::BonaFideViolation { .. })
        ));
    }

    #[test]
    fn fixed_point_on_standard_form() {
        let p = StandardFormParams::new(1.3, 0.9, 0.6, -0.2);
        let q = standard_form_invariants(&p.assemble().unwrap()).unwrap();
        assert!(close(q.a, p.a, 1e-12) && close(q.b, p.b, 1e-12));
        assert!(close(q.c1, p.c1, 1e-12) && close(q.c2, p.c2, 1e-12));
    }

    #[test]
    fn recovers_rotated_squeezed_vacuum() {
        let r: f64 = 0.3;
        let cm = StandardFormParams::two_mode_squeezed_vacuum(r)
            .assemble()
            .unwrap();
        let local = SymplecticMap::rotation(0.4)
            .compose(&SymplecticMap::squeezer(0.7))
            .unwrap()
            .direct_sum(
                &SymplecticMap::squeezer(-0.2)
                    .compose(&SymplecticMap::rotation(2.1))
                    .unwrap(),
            );
        let moved = local.apply(&cm).unwrap();
        let q = standard_form_invariants(&moved).unwrap();
        let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        assert!(close(q.a, ch, 1e-10) && close(q.b, ch, 1e-10));
        assert!(close(q.c1, sh, 1e-10) && close(q.c2, -sh, 1e-10), "{q:?}");
    }

    #[test]
    fn sign_convention_flips_negative_first_correlation() {
        let p = StandardFormParams::new(1.0, 1.0, -0.4, 0.2);
        let q = standard_form_invariants(&p.assemble().unwrap()).unwrap();
        assert!(close(q.c1, 0.4, 1e-12) && close(q.c2, -0.2, 1e-12), "{q:?}");
    }

    #[test]
    fn sub_vacuum_local_block_never_reaches_reduction() {
        let mut m = DMatrix::identity(4, 4) * 0.5;
        m[(0, 0)] = 0.2;
        m[(1, 1)] = 1.0;
        assert!(CovarianceMatrix::new(m).is_err());
    }
}
