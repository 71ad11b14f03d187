use num_complex::Complex64;

use super::{build_r_matrix, hermite_table_capped, RMatrix};
use crate::error::Result;
use crate::gaussian::CovarianceMatrix;

/// `h = (α₁*, α₂*, α₁, α₂)`.
fn amplitude_vector(alpha1: Complex64, alpha2: Complex64) -> [Complex64; 4] {
    [alpha1.conj(), alpha2.conj(), alpha1, alpha2]
}

/// `−½ hᵀ R h`.
fn quadratic_exponent(r: &RMatrix, h: &[Complex64; 4]) -> Complex64 {
    let mut acc = Complex64::default();
    for i in 0..4 {
        for j in 0..4 {
            acc += h[i] * r.get(i, j) * h[j];
        }
    }
    -0.5 * acc
}

/// Compares `exp(−½hᵀRh)` with its Hermite expansion `Σ_μ h^μ H_μ(0)/μ!`
/// summed over all indices `≤ cutoff`. Returns `(lhs, rhs_partial)`.
pub fn generating_function_check(
    r: &RMatrix,
    alpha1: Complex64,
    alpha2: Complex64,
    cutoff: usize,
) -> (Complex64, Complex64) {
    let h = amplitude_vector(alpha1, alpha2);
    let lhs = quadratic_exponent(r, &h).exp();
    let table = hermite_table_capped(r, cutoff, usize::MAX).expect("uncapped");
    // x^k / √(k!) for each of the four coordinates
    let powers: Vec<Vec<Complex64>> = h
        .iter()
        .map(|&x| {
            let mut v = Vec::with_capacity(cutoff + 1);
            let mut p = Complex64::new(1.0, 0.0);
            v.push(p);
            for k in 1..=cutoff {
                p *= x / (k as f64).sqrt();
                v.push(p);
            }
            v
        })
        .collect();
    let values = table.values();
    let n = cutoff + 1;
    let mut rhs = Complex64::default();
    let mut idx = 0;
    for m1 in 0..n {
        for m2 in 0..n {
            let p12 = powers[0][m1] * powers[1][m2];
            for n1 in 0..n {
                let p123 = p12 * powers[2][n1];
                for p4 in &powers[3] {
                    rhs += values[idx] * p123 * p4;
                    idx += 1;
                }
            }
        }
    }
    (lhs, rhs)
}

/// Husimi function `Φ(α₁, α₂) = exp(−½hᵀRh − |α₁|² − |α₂|²) / (π² √det(γ + ½𝟙))`
/// of a zero-mean two-mode state.
pub fn husimi_at(cm: &CovarianceMatrix, alpha1: Complex64, alpha2: Complex64) -> Result<f64> {
    let r = build_r_matrix(cm)?;
    Ok(husimi_from_r(&r, alpha1, alpha2))
}

pub(crate) fn husimi_from_r(r: &RMatrix, alpha1: Complex64, alpha2: Complex64) -> f64 {
    let h = amplitude_vector(alpha1, alpha2);
    let e = quadratic_exponent(r, &h).re - alpha1.norm_sqr() - alpha2.norm_sqr();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    e.exp() / (pi2 * r.det_factor.sqrt())
}
