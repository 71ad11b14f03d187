use nalgebra::DMatrix;

use super::{symplectic_spectrum, CovarianceMatrix, CLASSICAL_TOL, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    Separable,
    Entangled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptOutcome {
    pub verdict: Separability,
    /// Smallest symplectic eigenvalue of the partially transposed matrix.
    pub min_pt_symplectic_eig: f64,
}

impl PptOutcome {
    pub fn is_separable(&self) -> bool {
        self.verdict == Separability::Separable
    }
}

/// Phase-space partial transpose: flips the sign of the momentum of every
/// listed mode.
pub fn partial_transpose(cm: &CovarianceMatrix, modes: &[usize]) -> Result<DMatrix<f64>> {
    let mut flip = vec![1.0; cm.dim()];
    for &j in modes {
        if j >= cm.modes() {
            return Err(Error::InvalidPartition(format!("mode {j} out of range")));
        }
        flip[2 * j + 1] = -1.0;
    }
    let m = cm.matrix();
    Ok(DMatrix::from_fn(cm.dim(), cm.dim(), |i, k| {
        flip[i] * flip[k] * m[(i, k)]
    }))
}

/// PPT test across `modes | rest`. Necessary for separability in general,
/// sufficient when one side has a single mode.
pub fn ppt_across(cm: &CovarianceMatrix, modes: &[usize]) -> Result<PptOutcome> {
    cm.split_indices(modes)?;
    let pt = partial_transpose(cm, modes)?;
    let nu = symplectic_spectrum(&pt)[0];
    Ok(PptOutcome {
        verdict: if nu < 0.5 - PSD_TOL {
            Separability::Entangled
        } else {
            Separability::Separable
        },
        min_pt_symplectic_eig: nu,
    })
}

/// Simon's criterion for a two-mode state (partial transpose of the second mode).
pub fn ppt_separability(cm: &CovarianceMatrix) -> Result<PptOutcome> {
    if cm.modes() != 2 {
        return Err(Error::NotTwoModes(cm.modes()));
    }
    ppt_across(cm, &[1])
}

/// A Gaussian state is classically correlated across `first | rest` iff it is
/// a product state, i.e. the correlation block `C` vanishes.
pub fn is_classical(cm: &CovarianceMatrix, first: &[usize]) -> Result<bool> {
    is_classical_with_tol(cm, first, CLASSICAL_TOL)
}

pub fn is_classical_with_tol(cm: &CovarianceMatrix, first: &[usize], tol: f64) -> Result<bool> {
    let (_, _, c) = cm.blocks(first)?;
    Ok(linalg::max_abs(&c) <= tol)
}
