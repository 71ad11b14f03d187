use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{build_r_matrix, hermite_table};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

/// Two-mode density matrix in the Fock basis, truncated at `cutoff` photons
/// per mode. Element `(m1, m2, n1, n2)` is `⟨m1, m2| ρ |n1, n2⟩`.
#[derive(Debug, Clone)]
pub struct TruncatedDensityMatrix {
    pub cutoff: usize,
    elements: Vec<Complex64>,
    /// `1 − Σ diagonal`.
    pub trace_deficit: f64,
}

impl TruncatedDensityMatrix {
    /// Wraps a dense `(d+1)⁴` array; fails unless it is Hermitian within `1e-12`.
    pub fn from_elements(cutoff: usize, elements: Vec<Complex64>) -> Result<Self> {
        let n = cutoff + 1;
        if elements.len() != n.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: n.pow(4),
                found: elements.len(),
            });
        }
        let tdm = Self {
            cutoff,
            elements,
            trace_deficit: 0.0,
        };
        if tdm.hermiticity_error() > 1e-12 {
            return Err(Error::InvalidInput(
                "density matrix is not Hermitian".into(),
            ));
        }
        let trace = tdm.trace();
        Ok(Self {
            trace_deficit: 1.0 - trace,
            ..tdm
        })
    }

    fn side(&self) -> usize {
        self.cutoff + 1
    }

    /// Row or column index of `|j1, j2⟩` in [`to_matrix`](Self::to_matrix).
    pub fn pair_index(&self, j1: usize, j2: usize) -> usize {
        j1 * self.side() + j2
    }

    fn flat(&self, m1: usize, m2: usize, n1: usize, n2: usize) -> usize {
        let n = self.side();
        ((m1 * n + m2) * n + n1) * n + n2
    }

    /// `⟨m1, m2| ρ |n1, n2⟩`; `None` beyond the cutoff.
    pub fn get(&self, m1: usize, m2: usize, n1: usize, n2: usize) -> Option<Complex64> {
        if [m1, m2, n1, n2].iter().any(|&x| x > self.cutoff) {
            return None;
        }
        Some(self.elements[self.flat(m1, m2, n1, n2)])
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    /// The `(d+1)² × (d+1)²` matrix with rows `|m1, m2⟩` and columns `|n1, n2⟩`.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let s = self.side() * self.side();
        DMatrix::from_row_slice(s, s, &self.elements)
    }

    pub fn trace(&self) -> f64 {
        let n = self.side();
        let mut t = 0.0;
        for m1 in 0..n {
            for m2 in 0..n {
                t += self.elements[self.flat(m1, m2, m1, m2)].re;
            }
        }
        t
    }

    /// `max |ρ_{m,n} − conj(ρ_{n,m})|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.side();
        let mut worst: f64 = 0.0;
        for m1 in 0..n {
            for m2 in 0..n {
                for n1 in 0..n {
                    for n2 in 0..n {
                        let a = self.elements[self.flat(m1, m2, n1, n2)];
                        let b = self.elements[self.flat(n1, n2, m1, m2)];
                        worst = worst.max((a - b.conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Writes `m1,m2,n1,n2,re,im` rows, skipping exact zeros unless `all`.
    pub fn write_csv<W: Write>(&self, mut out: W, all: bool) -> std::io::Result<()> {
        writeln!(out, "m1,m2,n1,n2,re,im")?;
        let n = self.side();
        for m1 in 0..n {
            for m2 in 0..n {
                for n1 in 0..n {
                    for n2 in 0..n {
                        let z = self.elements[self.flat(m1, m2, n1, n2)];
                        if all || z.re != 0.0 || z.im != 0.0 {
                            writeln!(
                                out,
                                "{m1},{m2},{n1},{n2},{},{}",
                                crate::io::fmt_sig(z.re),
                                crate::io::fmt_sig(z.im)
                            )?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Fock elements of a zero-mean two-mode Gaussian state up to `cutoff`.
pub fn fock_elements(cm: &CovarianceMatrix, cutoff: usize) -> Result<TruncatedDensityMatrix> {
    let r = build_r_matrix(cm)?;
    let table = hermite_table(&r, cutoff)?;
    let norm = 1.0 / r.det_factor.sqrt();
    let elements: Vec<Complex64> = table.into_values().into_iter().map(|h| h * norm).collect();
    let mut tdm = TruncatedDensityMatrix {
        cutoff,
        elements,
        trace_deficit: 0.0,
    };
    tdm.trace_deficit = 1.0 - tdm.trace();
    Ok(tdm)
}
