use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{symplectic_form, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg;

/// Covariance matrix of an `L`-mode Gaussian state.
///
/// Quadratures are ordered `(x₁, p₁, …, x_L, p_L)` with `ħ = 1`, so the vacuum
/// is `½·𝟙`. Every value of this type satisfies `γ + (i/2)Ω ≥ 0` up to
/// [`PSD_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CovarianceRecord", into = "CovarianceRecord")]
pub struct CovarianceMatrix {
    modes: usize,
    entries: DMatrix<f64>,
}

/// Row-major exchange form of a covariance matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CovarianceRecord {
    pub modes: usize,
    pub entries: Vec<Vec<f64>>,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty relation.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::InvalidCovariance(format!(
                "expected a non-empty square matrix of even size, got {rows}x{cols}"
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        let scale = 1.0 + linalg::max_abs(&entries);
        let asym = linalg::max_abs(&(&entries - entries.transpose()));
        if asym > 1e-12 * scale {
            return Err(Error::InvalidCovariance(format!(
                "matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let cm = Self {
            modes: rows / 2,
            entries: linalg::symmetrize(&entries),
        };
        let min_eig = cm.uncertainty_min_eigenvalue();
        if min_eig < -PSD_TOL {
            return Err(Error::BonaFideViolation {
                min_eigenvalue: min_eig,
            });
        }
        Ok(cm)
    }

    pub fn from_row_slice(modes: usize, data: &[f64]) -> Result<Self> {
        let n = 2 * modes;
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            modes,
            entries: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    /// Single-mode thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if nbar.is_nan() || nbar < 0.0 {
            return Err(Error::InvalidInput(format!(
                "negative mean photon number {nbar}"
            )));
        }
        Ok(Self {
            modes: 1,
            entries: DMatrix::identity(2, 2) * (nbar + 0.5),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn direct_sum(&self, other: &CovarianceMatrix) -> CovarianceMatrix {
        CovarianceMatrix {
            modes: self.modes + other.modes,
            entries: linalg::direct_sum(&self.entries, &other.entries),
        }
    }

    /// Reduced covariance matrix of the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<CovarianceMatrix> {
        if let Some(&bad) = modes.iter().find(|&&j| j >= self.modes) {
            return Err(Error::InvalidPartition(format!("mode {bad} out of range")));
        }
        let idx = linalg::quadrature_indices(modes);
        Ok(CovarianceMatrix {
            modes: modes.len(),
            entries: linalg::select(&self.entries, &idx, &idx),
        })
    }

    /// Blocks `(A, B, C)` of `γ = [[A, C], [Cᵀ, B]]` with respect to the split
    /// `first | complement`.
    pub fn blocks(&self, first: &[usize]) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
        let (ia, ib) = self.split_indices(first)?;
        Ok((
            linalg::select(&self.entries, &ia, &ia),
            linalg::select(&self.entries, &ib, &ib),
            linalg::select(&self.entries, &ia, &ib),
        ))
    }

    pub(crate) fn split_indices(&self, first: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut seen = vec![false; self.modes];
        for &j in first {
            if j >= self.modes || seen[j] {
                return Err(Error::InvalidPartition(format!(
                    "mode list {first:?} is not a subset of 0..{}",
                    self.modes
                )));
            }
            seen[j] = true;
        }
        let rest: Vec<usize> = (0..self.modes).filter(|&j| !seen[j]).collect();
        if first.is_empty() || rest.is_empty() {
            return Err(Error::InvalidPartition(
                "both parties need at least one mode".into(),
            ));
        }
        Ok((
            linalg::quadrature_indices(first),
            linalg::quadrature_indices(&rest),
        ))
    }

    /// Smallest eigenvalue of the Hermitian matrix `γ + (i/2)Ω`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let omega = symplectic_form(self.modes);
        let m = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            Complex64::new(self.entries[(i, j)], 0.5 * omega[(i, j)])
        });
        linalg::hermitian_eigenvalues(&m)[0]
    }

    /// Symplectic eigenvalues `ν₁ ≤ … ≤ ν_L`.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_spectrum(&self.entries)
    }

    pub fn det(&self) -> f64 {
        self.entries.determinant()
    }

    pub fn to_record(&self) -> CovarianceRecord {
        CovarianceRecord {
            modes: self.modes,
            entries: self
                .entries
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }
    }
}

/// Moduli of the eigenvalues of `iΩγ` for a symmetric positive definite `γ`,
/// each pair `±ν` reported once, ascending.
///
/// Evaluated on the similar Hermitian matrix `i γ^{1/2} Ω γ^{1/2}`.
pub fn symplectic_spectrum(gamma: &DMatrix<f64>) -> Vec<f64> {
    let n = gamma.nrows();
    let eig = gamma.clone().symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let root =
        &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let k = &root * symplectic_form(n / 2) * &root;
    let herm = k.map(|x| Complex64::new(0.0, x));
    let ev = linalg::hermitian_eigenvalues(&herm);
    // ascending spectrum is -ν_L..-ν_1, ν_1..ν_L
    ev[n / 2..].to_vec()
}

impl TryFrom<CovarianceRecord> for CovarianceMatrix {
    type Error = Error;

    fn try_from(rec: CovarianceRecord) -> Result<Self> {
        let n = 2 * rec.modes;
        if rec.entries.len() != n || rec.entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCovariance(format!(
                "expected {n} rows of {n} entries for {} modes",
                rec.modes
            )));
        }
        let flat: Vec<f64> = rec.entries.into_iter().flatten().collect();
        CovarianceMatrix::from_row_slice(rec.modes, &flat)
    }
}

impl From<CovarianceMatrix> for CovarianceRecord {
    fn from(cm: CovarianceMatrix) -> Self {
        cm.to_record()
    }
}
