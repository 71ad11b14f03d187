//! Four-index Hermite polynomials at the origin.
//!
//! Values are stored factorial-scaled, `h_μ = H_μ^{(R)}(0) / √(m₁! m₂! n₁! n₂!)`,
//! which keeps them O(1) for large indices. Dividing the recurrence
//! `H_{μ+e_i} = −Σ_j r_ij μ_j H_{μ−e_j}` by `√(μ!)` gives
//!
//! ```text
//! h_{μ+e_i} √(μ_i + 1) = −Σ_j r_ij √μ_j h_{μ−e_j}
//! ```
//!
//! Each entry `ν` is filled from `μ = ν − e_i` with `i` the first nonzero index
//! of `ν`. Entries are produced slice by slice in the first index; slice `k`
//! only reads slices `k − 1` and `k − 2`, so sums over the table can be
//! streamed with `O(d³)` memory. Odd-parity entries vanish and are set to
//! exactly zero.

use num_complex::Complex64;

use super::RMatrix;
use crate::error::{Error, Result};
use crate::special::ln_factorials;

/// Default largest per-mode photon cutoff for dense tables.
pub const DEFAULT_CUTOFF_CAP: usize = 40;

/// Environment variable overriding [`DEFAULT_CUTOFF_CAP`].
pub const CUTOFF_CAP_ENV: &str = "CVACT_MAX_CUTOFF";

/// Cutoff cap for dense `(d+1)⁴` tables, read from `CVACT_MAX_CUTOFF` when set.
pub fn cutoff_cap() -> usize {
    std::env::var(CUTOFF_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CUTOFF_CAP)
}

/// Dense table of scaled Hermite values for all indices `≤ cutoff`.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    pub r_matrix: RMatrix,
    pub cutoff: usize,
    values: Vec<Complex64>,
}

impl HermiteTable {
    fn side(&self) -> usize {
        self.cutoff + 1
    }

    pub fn index(&self, m1: usize, m2: usize, n1: usize, n2: usize) -> usize {
        let n = self.side();
        ((m1 * n + m2) * n + n1) * n + n2
    }

    /// Scaled value `h_μ`; `None` outside the table.
    pub fn get(&self, mu: [usize; 4]) -> Option<Complex64> {
        if mu.iter().any(|&x| x > self.cutoff) {
            return None;
        }
        Some(self.values[self.index(mu[0], mu[1], mu[2], mu[3])])
    }

    /// Unscaled polynomial value `H_μ^{(R)}(0)`.
    pub fn unscaled(&self, mu: [usize; 4]) -> Option<Complex64> {
        let lf = ln_factorials(self.cutoff);
        let scale: f64 = mu.iter().map(|&m| 0.5 * lf[m]).sum::<f64>().exp();
        self.get(mu).map(|h| h * scale)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Builds the dense table, failing beyond [`cutoff_cap`].
pub fn hermite_table(r: &RMatrix, cutoff: usize) -> Result<HermiteTable> {
    hermite_table_capped(r, cutoff, cutoff_cap())
}

pub fn hermite_table_capped(r: &RMatrix, cutoff: usize, cap: usize) -> Result<HermiteTable> {
    if cutoff > cap {
        return Err(Error::CutoffTooLarge { cutoff, cap });
    }
    let n = cutoff + 1;
    let slice = n * n * n;
    let coeffs = r.as_array();
    let roots = sqrt_table(n);
    let mut values = vec![Complex64::default(); n * slice];
    for k in 0..n {
        let (done, rest) = values.split_at_mut(k * slice);
        let prev1 = if k >= 1 {
            &done[(k - 1) * slice..]
        } else {
            &[][..]
        };
        let prev2 = if k >= 2 {
            &done[(k - 2) * slice..(k - 1) * slice]
        } else {
            &[][..]
        };
        fill_slice(&coeffs, &roots, n, k, prev1, prev2, &mut rest[..slice]);
    }
    Ok(HermiteTable {
        r_matrix: r.clone(),
        cutoff,
        values,
    })
}

/// Per-shell sums of `|ρ̃_{m,n}|`, of its off-diagonal part and of the diagonal,
/// where shell `s` holds the indices whose largest component equals `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSums {
    pub l1: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub trace: Vec<f64>,
}

impl ShellSums {
    /// `Σ|ρ̃|` over all indices `≤ d`.
    pub fn l1_upto(&self, d: usize) -> f64 {
        self.l1[..=d].iter().sum()
    }

    pub fn off_diagonal_upto(&self, d: usize) -> f64 {
        self.off_diagonal[..=d].iter().sum()
    }

    pub fn trace_upto(&self, d: usize) -> f64 {
        self.trace[..=d].iter().sum()
    }
}

/// Streams the table up to `cutoff` and accumulates shell sums of the Fock
/// elements `h_μ / √det(γ + ½𝟙)` without materialising it.
pub fn shell_sums(r: &RMatrix, cutoff: usize) -> ShellSums {
    let n = cutoff + 1;
    let slice = n * n * n;
    let coeffs = r.as_array();
    let roots = sqrt_table(n);
    let norm = 1.0 / r.det_factor.sqrt();
    let mut l1 = vec![0.0; n];
    let mut off_diagonal = vec![0.0; n];
    let mut trace = vec![0.0; n];
    let mut prev2 = vec![Complex64::default(); slice];
    let mut prev1 = vec![Complex64::default(); slice];
    let mut cur = vec![Complex64::default(); slice];
    for k in 0..n {
        fill_slice(&coeffs, &roots, n, k, &prev1, &prev2, &mut cur);
        let mut idx = 0;
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let h = cur[idx];
                    idx += 1;
                    if (k + b + c + e) % 2 == 1 {
                        continue;
                    }
                    let shell = k.max(b).max(c).max(e);
                    let rho = h * norm;
                    let a = rho.norm();
                    l1[shell] += a;
                    if k == c && b == e {
                        trace[shell] += rho.re;
                    } else {
                        off_diagonal[shell] += a;
                    }
                }
            }
        }
        std::mem::swap(&mut prev2, &mut prev1);
        std::mem::swap(&mut prev1, &mut cur);
    }
    ShellSums {
        l1,
        off_diagonal,
        trace,
    }
}

fn sqrt_table(n: usize) -> Vec<f64> {
    (0..=n).map(|k| (k as f64).sqrt()).collect()
}

/// Fills slice `k` (first index fixed) from the two preceding slices.
fn fill_slice(
    r: &[[Complex64; 4]; 4],
    roots: &[f64],
    n: usize,
    k: usize,
    prev1: &[Complex64],
    prev2: &[Complex64],
    out: &mut [Complex64],
) {
    let at = |b: usize, c: usize, e: usize| (b * n + c) * n + e;
    let zero = Complex64::default();
    for b in 0..n {
        for c in 0..n {
            for e in 0..n {
                let idx = at(b, c, e);
                if (k + b + c + e) % 2 == 1 {
                    out[idx] = zero;
                    continue;
                }
                out[idx] = if k > 0 {
                    let mut acc = zero;
                    if k >= 2 {
                        acc += r[0][0] * (roots[k - 1] * prev2[idx]);
                    }
                    if b > 0 {
                        acc += r[0][1] * (roots[b] * prev1[at(b - 1, c, e)]);
                    }
                    if c > 0 {
                        acc += r[0][2] * (roots[c] * prev1[at(b, c - 1, e)]);
                    }
                    if e > 0 {
                        acc += r[0][3] * (roots[e] * prev1[at(b, c, e - 1)]);
                    }
                    -acc / roots[k]
                } else if b > 0 {
                    let mut acc = zero;
                    if b >= 2 {
                        acc += r[1][1] * (roots[b - 1] * out[at(b - 2, c, e)]);
                    }
                    if c > 0 {
                        acc += r[1][2] * (roots[c] * out[at(b - 1, c - 1, e)]);
                    }
                    if e > 0 {
                        acc += r[1][3] * (roots[e] * out[at(b - 1, c, e - 1)]);
                    }
                    -acc / roots[b]
                } else if c > 0 {
                    let mut acc = zero;
                    if c >= 2 {
                        acc += r[2][2] * (roots[c - 1] * out[at(0, c - 2, e)]);
                    }
                    if e > 0 {
                        acc += r[2][3] * (roots[e] * out[at(0, c - 1, e - 1)]);
                    }
                    -acc / roots[c]
                } else if e > 0 {
                    if e >= 2 {
                        -(r[3][3] * (roots[e - 1] * out[at(0, 0, e - 2)])) / roots[e]
                    } else {
                        zero
                    }
                } else {
                    Complex64::new(1.0, 0.0)
                };
            }
        }
    }
}
