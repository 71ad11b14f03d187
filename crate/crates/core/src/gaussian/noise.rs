use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{CovarianceMatrix, PSD_TOL};
use crate::error::{Error, Result};
use crate::io::MatrixRows;
use crate::linalg;

/// Eigenvalues of the noise matrix above this threshold count as strictly positive.
pub const NOISE_EIG_THRESHOLD: f64 = 1e-10;

/// A separable covariance matrix written as product state plus classical noise,
/// `γ = γ_A ⊕ γ_B + P` with `P ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseRecord", into = "NoiseRecord")]
pub struct ProductNoiseDecomposition {
    pub gamma_a: CovarianceMatrix,
    pub gamma_b: CovarianceMatrix,
    pub noise: DMatrix<f64>,
    /// Eigenvectors of `P` for its strictly positive eigenvalues, one per column.
    pub noise_basis: DMatrix<f64>,
    pub noise_eigs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NoiseRecord {
    gamma_a: CovarianceMatrix,
    gamma_b: CovarianceMatrix,
    noise: MatrixRows,
}

impl ProductNoiseDecomposition {
    pub fn product(&self) -> CovarianceMatrix {
        self.gamma_a.direct_sum(&self.gamma_b)
    }

    /// `γ_A ⊕ γ_B + P`.
    pub fn target(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.product().matrix() + &self.noise)
    }

    /// `𝒱 diag(λ) 𝒱ᵀ`.
    pub fn reconstructed_noise(&self) -> DMatrix<f64> {
        let lam = DMatrix::from_diagonal(&DVector::from_vec(self.noise_eigs.clone()));
        &self.noise_basis * lam * self.noise_basis.transpose()
    }

    /// Number `K` of strictly positive noise eigenvalues.
    pub fn rank(&self) -> usize {
        self.noise_eigs.len()
    }
}

/// Adds the classical noise `P` to the product `γ_A ⊕ γ_B` and records the
/// spectral data `(𝒱, λ)` of `P` restricted to its strictly positive part.
pub fn product_noise_compose(
    gamma_a: &CovarianceMatrix,
    gamma_b: &CovarianceMatrix,
    noise: &DMatrix<f64>,
) -> Result<(CovarianceMatrix, ProductNoiseDecomposition)> {
    let n = gamma_a.dim() + gamma_b.dim();
    if noise.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: noise.nrows(),
        });
    }
    let scale = 1.0 + linalg::max_abs(noise);
    if linalg::max_abs(&(noise - noise.transpose())) > 1e-12 * scale {
        return Err(Error::InvalidInput("noise matrix is not symmetric".into()));
    }
    let noise = linalg::symmetrize(noise);
    let eig = noise.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.min();
    if min_eig < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min_eig,
        });
    }

    let mut order: Vec<usize> = (0..n)
        .filter(|&i| eig.eigenvalues[i] > NOISE_EIG_THRESHOLD)
        .collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let noise_eigs: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let noise_basis = DMatrix::from_fn(n, order.len(), |r, c| eig.eigenvectors[(r, order[c])]);

    let decomposition = ProductNoiseDecomposition {
        gamma_a: gamma_a.clone(),
        gamma_b: gamma_b.clone(),
        noise,
        noise_basis,
        noise_eigs,
    };
    let composed = decomposition.target()?;
    Ok((composed, decomposition))
}

impl TryFrom<NoiseRecord> for ProductNoiseDecomposition {
    type Error = Error;

    fn try_from(rec: NoiseRecord) -> Result<Self> {
        let noise = rec.noise.into_matrix()?;
        product_noise_compose(&rec.gamma_a, &rec.gamma_b, &noise).map(|(_, d)| d)
    }
}

impl From<ProductNoiseDecomposition> for NoiseRecord {
    fn from(d: ProductNoiseDecomposition) -> Self {
        NoiseRecord {
            gamma_a: d.gamma_a,
            gamma_b: d.gamma_b,
            noise: MatrixRows::from_matrix(&d.noise),
        }
    }
}
