use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{symplectic_form, CovarianceMatrix, SYMPLECTIC_TOL};
use crate::error::{Error, Result};
use crate::linalg;

/// True iff `S` is square, of even size and `‖SΩSᵀ − Ω‖_max ≤ 1e-10`.
pub fn is_symplectic(s: &DMatrix<f64>) -> bool {
    let (r, c) = s.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return false;
    }
    let omega = symplectic_form(r / 2);
    linalg::max_abs(&(s * &omega * s.transpose() - &omega)) <= SYMPLECTIC_TOL
}

/// Phase-space representation of a Gaussian unitary, `SΩSᵀ = Ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymplecticMap {
    modes: usize,
    entries: DMatrix<f64>,
}

impl SymplecticMap {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !is_symplectic(&entries) {
            return Err(Error::NotSymplectic);
        }
        Ok(Self {
            modes: entries.nrows() / 2,
            entries,
        })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            modes,
            entries: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// `diag(e^r, e^{-r})`: squeezes `p` for `r > 0`.
    pub fn squeezer(r: f64) -> Self {
        Self {
            modes: 1,
            entries: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                r.exp(),
                (-r).exp(),
            ])),
        }
    }

    /// Phase rotation `a → a e^{-iθ}`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            modes: 1,
            entries: DMatrix::from_row_slice(2, 2, &[c, s, -s, c]),
        }
    }

    /// Beam splitter with transmissivity `cos²θ` acting on two modes.
    pub fn beam_splitter(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            c, 0.0, s, 0.0,
            0.0, c, 0.0, s,
            -s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        ]);
        Self {
            modes: 2,
            entries: m,
        }
    }

    /// Two-mode squeezer; applied to the vacuum it yields the two-mode squeezed
    /// vacuum with `x`-correlations and `p`-anticorrelations.
    pub fn two_mode_squeezer(r: f64) -> Self {
        let (ch, sh) = (r.cosh(), r.sinh());
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            ch, 0.0, sh, 0.0,
            0.0, ch, 0.0, -sh,
            sh, 0.0, ch, 0.0,
            0.0, -sh, 0.0, ch,
        ]);
        Self {
            modes: 2,
            entries: m,
        }
    }

    /// Reorders modes: output mode `k` is input mode `perm[k]`.
    pub fn mode_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidInput(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (k, &p) in perm.iter().enumerate() {
            m[(2 * k, 2 * p)] = 1.0;
            m[(2 * k + 1, 2 * p + 1)] = 1.0;
        }
        Ok(Self {
            modes: n,
            entries: m,
        })
    }

    pub fn direct_sum(&self, other: &SymplecticMap) -> SymplecticMap {
        SymplecticMap {
            modes: self.modes + other.modes,
            entries: linalg::direct_sum(&self.entries, &other.entries),
        }
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &SymplecticMap) -> Result<SymplecticMap> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch {
                expected: self.modes,
                found: other.modes,
            });
        }
        Ok(SymplecticMap {
            modes: self.modes,
            entries: &self.entries * &other.entries,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `S γ Sᵀ`.
    pub fn apply(&self, cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        if cm.modes() != self.modes {
            return Err(Error::DimensionMismatch {
                expected: self.modes,
                found: cm.modes(),
            });
        }
        CovarianceMatrix::new(linalg::symmetrize(
            &(&self.entries * cm.matrix() * self.entries.transpose()),
        ))
    }

    /// Congruence `S M Sᵀ` of an arbitrary symmetric matrix (e.g. a noise term).
    pub fn conjugate(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        linalg::symmetrize(&(&self.entries * m * self.entries.transpose()))
    }
}

impl TryFrom<Vec<Vec<f64>>> for SymplecticMap {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("symplectic map must be square".into()));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        SymplecticMap::new(DMatrix::from_row_slice(n, n, &flat))
    }
}

impl From<SymplecticMap> for Vec<Vec<f64>> {
    fn from(s: SymplecticMap) -> Self {
        s.entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}
