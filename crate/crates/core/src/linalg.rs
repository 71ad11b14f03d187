//! Small dense linear-algebra helpers shared by the phase-space and Fock-space code.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or(f64::INFINITY)
}

pub fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Largest absolute entry; zero for an empty matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Submatrix with the given row and column index lists.
pub fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Quadrature indices (x_j, p_j) belonging to the listed modes.
pub fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&j| [2 * j, 2 * j + 1]).collect()
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Inverse of the symmetric block matrix `[[A, C], [Cᵀ, B]]` assembled block by block
/// from Schur complements:
///
/// ```text
/// [ (A − C B⁻¹ Cᵀ)⁻¹                 A⁻¹ C (Cᵀ A⁻¹ C − B)⁻¹ ]
/// [ (Cᵀ A⁻¹ C − B)⁻¹ Cᵀ A⁻¹          (B − Cᵀ A⁻¹ C)⁻¹       ]
/// ```
///
/// Returns `None` when any of the required inverses does not exist.
pub fn blockwise_inverse(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> Option<DMatrix<f64>> {
    let a_inv = a.clone().try_inverse()?;
    let b_inv = b.clone().try_inverse()?;
    let ct = c.transpose();
    let top_left = (a - c * &b_inv * &ct).try_inverse()?;
    let neg_schur_inv = (&ct * &a_inv * c - b).try_inverse()?;
    let top_right = &a_inv * c * &neg_schur_inv;
    let bottom_left = &neg_schur_inv * &ct * &a_inv;
    let bottom_right = (b - &ct * &a_inv * c).try_inverse()?;

    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(&top_left);
    out.view_mut((0, na), (na, nb)).copy_from(&top_right);
    out.view_mut((na, 0), (nb, na)).copy_from(&bottom_left);
    out.view_mut((na, na), (nb, nb)).copy_from(&bottom_right);
    Some(out)
}
