use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::TruncatedDensityMatrix;
use crate::linalg;

/// Largest number of rows of the dense four-mode representation.
pub const DENSE_ROW_CAP: usize = 4096;

/// Output of the CNOT activation protocol,
/// `Σ ρ̃_{m,n} |m⟩⟨n|_{AB} ⊗ |m⟩⟨n|_{A'B'}`.
///
/// The maximally correlated support is stored as the two-mode matrix ρ̃
/// itself; the full `(d+1)⁴ × (d+1)⁴` matrix over `A, B, A', B'` is kept only
/// when it fits under [`DENSE_ROW_CAP`] rows.
#[derive(Debug, Clone)]
pub struct FourModeState {
    pub cutoff: usize,
    pub amplitudes: TruncatedDensityMatrix,
    dense: Option<DMatrix<Complex64>>,
    /// Diagonal weight dropped because a CNOT target exceeded the cutoff.
    pub discarded_mass: f64,
}

impl FourModeState {
    pub fn dense_enabled(&self) -> bool {
        self.dense.is_some()
    }

    /// Dense matrix with basis index `((a·D + b)·D + a')·D + b'`, `D = d + 1`.
    pub fn dense(&self) -> Option<&DMatrix<Complex64>> {
        self.dense.as_ref()
    }

    /// `Σ_m ρ̃_{m,m}`.
    pub fn trace(&self) -> f64 {
        self.amplitudes.trace()
    }
}

fn dense_rows(cutoff: usize) -> usize {
    (cutoff + 1).pow(4)
}

/// Protocol output; the dense form is attached when it fits under the cap.
pub fn protocol_output(tdm: &TruncatedDensityMatrix) -> FourModeState {
    protocol_output_dense(tdm).unwrap_or_else(|_| FourModeState {
        cutoff: tdm.cutoff,
        amplitudes: tdm.clone(),
        dense: None,
        discarded_mass: 0.0,
    })
}

/// Protocol output with the dense form, built by applying the CNOT pair to
/// `ρ̃ ⊗ |00⟩⟨00|`.
pub fn protocol_output_dense(tdm: &TruncatedDensityMatrix) -> Result<FourModeState> {
    let rows = dense_rows(tdm.cutoff);
    if rows > DENSE_ROW_CAP {
        return Err(Error::DenseTooLarge {
            dim: rows,
            cap: DENSE_ROW_CAP,
        });
    }
    let d = tdm.cutoff + 1;
    let input = DMatrix::from_fn(rows, rows, |i, j| {
        let (a, b, a2, b2) = split(i, d);
        let (c, e, c2, e2) = split(j, d);
        if a2 == 0 && b2 == 0 && c2 == 0 && e2 == 0 {
            tdm.get(a, b, c, e).unwrap()
        } else {
            Complex64::default()
        }
    });
    let (dense, discarded_mass) = apply_cnot_pair(&input, tdm.cutoff);
    Ok(FourModeState {
        cutoff: tdm.cutoff,
        amplitudes: tdm.clone(),
        dense: Some(dense),
        discarded_mass,
    })
}

fn split(i: usize, d: usize) -> (usize, usize, usize, usize) {
    (i / (d * d * d), (i / (d * d)) % d, (i / d) % d, i % d)
}

fn join(a: usize, b: usize, a2: usize, b2: usize, d: usize) -> usize {
    ((a * d + b) * d + a2) * d + b2
}

/// `|a, b, a', b'⟩ → |a, b, a + a', b + b'⟩` on a dense four-mode matrix.
/// Basis states whose target leaves the truncated space are dropped; the
/// returned mass is the diagonal weight lost that way.
pub fn apply_cnot_pair(rho: &DMatrix<Complex64>, cutoff: usize) -> (DMatrix<Complex64>, f64) {
    let d = cutoff + 1;
    let rows = rho.nrows();
    let target: Vec<Option<usize>> = (0..rows)
        .map(|i| {
            let (a, b, a2, b2) = split(i, d);
            (a + a2 <= cutoff && b + b2 <= cutoff).then(|| join(a, b, a + a2, b + b2, d))
        })
        .collect();
    let mut out = DMatrix::zeros(rows, rows);
    let mut discarded = 0.0;
    for i in 0..rows {
        let Some(ti) = target[i] else {
            discarded += rho[(i, i)].re;
            continue;
        };
        for j in 0..rows {
            if let Some(tj) = target[j] {
                out[(ti, tj)] = rho[(i, j)];
            }
        }
    }
    (out, discarded)
}

/// Partial transpose over `A, B` of a dense four-mode matrix:
/// `ρ^{T_AB}[(a,b,a',b'), (c,e,c',e')] = ρ[(c,e,a',b'), (a,b,c',e')]`.
pub fn partial_transpose_ab(rho: &DMatrix<Complex64>, cutoff: usize) -> DMatrix<Complex64> {
    let d = cutoff + 1;
    let rows = rho.nrows();
    DMatrix::from_fn(rows, rows, |i, j| {
        let (a, b, a2, b2) = split(i, d);
        let (c, e, c2, e2) = split(j, d);
        rho[(join(c, e, a2, b2, d), join(a, b, c2, e2, d))]
    })
}

/// `½(‖ρ^{T_AB}‖₁ − 1)` from the full spectrum of the partial transpose.
pub fn negativity_oracle_dense(state: &FourModeState) -> Result<f64> {
    let rho = state.dense().ok_or(Error::DenseTooLarge {
        dim: dense_rows(state.cutoff),
        cap: DENSE_ROW_CAP,
    })?;
    let pt = partial_transpose_ab(rho, state.cutoff);
    let trace_norm: f64 = if pt.iter().all(|z| z.im == 0.0) {
        linalg::symmetric_eigenvalues(&pt.map(|z| z.re))
            .iter()
            .map(|l| l.abs())
            .sum()
    } else {
        linalg::hermitian_eigenvalues(&pt)
            .iter()
            .map(|l| l.abs())
            .sum()
    };
    Ok(0.5 * (trace_norm - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_elements;
    use crate::gaussian::{CovarianceMatrix, StandardFormParams};

    fn two_level_pair(c: f64) -> TruncatedDensityMatrix {
        let mut e = vec![Complex64::default(); 16];
        let idx = |m1: usize, m2: usize, n1: usize, n2: usize| ((m1 * 2 + m2) * 2 + n1) * 2 + n2;
        e[idx(0, 0, 0, 0)] = Complex64::new(0.5, 0.0);
        e[idx(1, 1, 1, 1)] = Complex64::new(0.5, 0.0);
        e[idx(0, 0, 1, 1)] = Complex64::new(c, 0.0);
        e[idx(1, 1, 0, 0)] = Complex64::new(c, 0.0);
        TruncatedDensityMatrix::from_elements(1, e).unwrap()
    }

    #[test]
    fn vacuum_output_is_single_projector() {
        let t = fock_elements(&CovarianceMatrix::vacuum(2), 2).unwrap();
        let s = protocol_output_dense(&t).unwrap();
        let rho = s.dense().unwrap();
        assert_eq!(rho[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(rho.iter().filter(|z| z.norm() != 0.0).count(), 1);
        assert_eq!(negativity_oracle_dense(&s).unwrap(), 0.0);
    }

    #[test]
    fn off_diagonal_pair_negativity() {
        let s = protocol_output_dense(&two_level_pair(0.3)).unwrap();
        assert!((negativity_oracle_dense(&s).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn complex_pair_uses_modulus() {
        let mut t = two_level_pair(0.0);
        let mut e = t.elements().to_vec();
        e[3] = Complex64::new(0.0, 0.2);
        e[12] = Complex64::new(0.0, -0.2);
        t = TruncatedDensityMatrix::from_elements(1, e).unwrap();
        let s = protocol_output_dense(&t).unwrap();
        assert!((negativity_oracle_dense(&s).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn tmsv_trace_and_support() {
        let r: f64 = 0.3;
        let cm = StandardFormParams::two_mode_squeezed_vacuum(r)
            .assemble()
            .unwrap();
        let s = protocol_output_dense(&fock_elements(&cm, 3).unwrap()).unwrap();
        let rho = s.dense().unwrap();
        assert_eq!(rho.nrows(), 256);
        let t2 = r.tanh().powi(2);
        let expect: f64 = (0..=3).map(|m| (1.0 - t2) * t2.powi(m)).sum();
        let tr: f64 = rho.diagonal().iter().map(|z| z.re).sum();
        assert!((tr - expect).abs() < 1e-12);
        assert_eq!(s.discarded_mass, 0.0);
    }

    #[test]
    fn cnot_drops_out_of_range_targets() {
        let rows = 16;
        let mut rho = DMatrix::zeros(rows, rows);
        // |1, 0, 1, 0⟩ would map to a' = 2 > cutoff 1
        let i = join(1, 0, 1, 0, 2);
        rho[(i, i)] = Complex64::new(1.0, 0.0);
        let (out, lost) = apply_cnot_pair(&rho, 1);
        assert_eq!(lost, 1.0);
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn dense_cap() {
        let t = fock_elements(&CovarianceMatrix::vacuum(2), 8).unwrap();
        assert!(matches!(
            protocol_output_dense(&t),
            Err(Error::DenseTooLarge { dim: 6561, .. })
        ));
        let s = protocol_output(&t);
        assert!(!s.dense_enabled());
        assert!(negativity_oracle_dense(&s).is_err());
    }
}
