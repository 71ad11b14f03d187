use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, StandardFormParams};

/// Symmetric complex matrix defining the four-index Hermite polynomials whose
/// values at the origin give the Fock elements of a zero-mean two-mode state.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub entries: Matrix4<Complex64>,
    /// `det(γ + ½𝟙)`.
    pub det_factor: f64,
}

impl RMatrix {
    pub fn zero() -> Self {
        Self {
            entries: Matrix4::zeros(),
            det_factor: 1.0,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub(crate) fn as_array(&self) -> [[Complex64; 4]; 4] {
        let mut out = [[Complex64::default(); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entries[(i, j)];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `‖R − Rᵀ‖_max`.
    pub fn asymmetry(&self) -> f64 {
        (self.entries - self.entries.transpose())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `O = ⊕ (1/√2)(1 i; 1 −i)`, taking `(x, p)` to `(α, α*)` coordinates.
fn quadrature_to_amplitude() -> Matrix4<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut o = Matrix4::zeros();
    for j in 0..2 {
        let k = 2 * j;
        o[(k, k)] = c(s, 0.0);
        o[(k, k + 1)] = c(0.0, s);
        o[(k + 1, k)] = c(s, 0.0);
        o[(k + 1, k + 1)] = c(0.0, -s);
    }
    o
}

/// `α† = hᵀ W`
#[rustfmt::skip]
fn w_perm() -> Matrix4<Complex64> {
    Matrix4::from_row_slice(&[
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ].map(|x| c(x, 0.0)))
}

/// `α = V h`
#[rustfmt::skip]
fn v_perm() -> Matrix4<Complex64> {
    Matrix4::from_row_slice(&[
        0.0, 0.0, 1.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 1.0, 0.0, 0.0,
    ].map(|x| c(x, 0.0)))
}

/// `R = W O [(γ + ½𝟙)⁻¹ − 𝟙] O† V` for a two-mode covariance matrix.
pub fn build_r_matrix(cm: &CovarianceMatrix) -> Result<RMatrix> {
    if cm.modes() != 2 {
        return Err(Error::NotTwoModes(cm.modes()));
    }
    let g = Matrix4::from_fn(|i, j| cm.matrix()[(i, j)]) + Matrix4::identity() * 0.5;
    let det_factor = g.determinant();
    let g_inv = g
        .try_inverse()
        .ok_or(Error::SingularMatrix("gamma + 1/2"))?;
    let m = (g_inv - Matrix4::identity()).map(|x| c(x, 0.0));
    let o = quadrature_to_amplitude();
    let entries = w_perm() * o * m * o.adjoint() * v_perm();
    Ok(RMatrix {
        entries,
        det_factor,
    })
}

/// Closed form of `R` for a standard-form covariance matrix:
/// `R = [[R₁ − R₂, R₁ + R₂ − 𝟙], [R₁ + R₂ − 𝟙, R₁ − R₂]]` with
/// `R_j = (1/2d_j) [[b + ½, −c_j], [−c_j, a + ½]]`, `d_j = (a + ½)(b + ½) − c_j²`.
pub fn standard_form_r_matrix(p: &StandardFormParams) -> RMatrix {
    let (ah, bh) = (p.a + 0.5, p.b + 0.5);
    let rj = |cj: f64| {
        let dj = ah * bh - cj * cj;
        Matrix2::new(bh, -cj, -cj, ah) / (2.0 * dj)
    };
    let (r1, r2) = (rj(p.c1), rj(p.c2));
    let diag = r1 - r2;
    let off = r1 + r2 - Matrix2::identity();
    let mut entries = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            entries[(i, j)] = c(diag[(i, j)], 0.0);
            entries[(i + 2, j + 2)] = c(diag[(i, j)], 0.0);
            entries[(i, j + 2)] = c(off[(i, j)], 0.0);
            entries[(i + 2, j)] = c(off[(i, j)], 0.0);
        }
    }
    RMatrix {
        entries,
        det_factor: (ah * bh - p.c1 * p.c1) * (ah * bh - p.c2 * p.c2),
    }
}
