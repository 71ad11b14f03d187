//! Output negativity of the activation protocol for two-mode Gaussian inputs.
//!
//! For the maximally correlated output state the negativity reduces to the
//! off-diagonal ℓ1 mass of the input density matrix, `½ Σ_{m≠n} |ρ̃_{m,n}|`.
//! Values computed at standard form are not optimised over local unitaries and
//! are therefore upper bounds on the negativity of quantumness (exact for pure
//! states).

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{build_r_matrix, husimi_from_r, shell_sums, TruncatedDensityMatrix};
use crate::gaussian::{squeezing_for_mean_photons, CovarianceMatrix};
use crate::special::{ln_binomial, ln_factorials};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_CUTOFF: usize = 36;
/// Photons per mode added between successive convergence checks.
pub const CUTOFF_STEP: usize = 4;
/// Default term budget for [`negativity_coherent_mixture`].
pub const DEFAULT_SERIES_TERMS: usize = 5000;
const SERIES_TAIL_TOL: f64 = 1e-10;
const FIRST_PASS_CUTOFF: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    pub value: f64,
    pub cutoff_used: usize,
    /// Increment of the absolute sum over the last step plus the trace deficit.
    pub tail_estimate: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// `½(husimi_value − 1)`; negative values are trivial bounds.
    pub lower_bound: f64,
    /// `(πe)² Φ(1, 1)`.
    pub husimi_value: f64,
}

/// Sum of the absolute values of all stored elements.
pub fn l1_norm(tdm: &TruncatedDensityMatrix) -> f64 {
    tdm.elements().iter().map(|z| z.norm()).sum()
}

/// `Σ_{m≠n} |ρ̃_{m,n}|` over the stored elements.
pub fn off_diagonal_l1(tdm: &TruncatedDensityMatrix) -> f64 {
    let d = tdm.cutoff;
    let mut acc = 0.0;
    for m1 in 0..=d {
        for m2 in 0..=d {
            for n1 in 0..=d {
                for n2 in 0..=d {
                    if (m1, m2) != (n1, n2) {
                        acc += tdm.get(m1, m2, n1, n2).unwrap().norm();
                    }
                }
            }
        }
    }
    acc
}

/// Negativity of the maximally correlated output built from exactly these
/// elements, `½(‖ρ̃‖_ℓ1 − 1)`. On a truncated matrix this differs from
/// `½ Σ_{m≠n} |ρ̃_{m,n}|` by half the trace deficit.
pub fn l1_shortcut_negativity(tdm: &TruncatedDensityMatrix) -> f64 {
    0.5 * (l1_norm(tdm) - 1.0)
}

/// Output negativity `½ Σ_{m≠n} |ρ̃_{m,n}|` with an adaptive photon cutoff.
///
/// Cutoffs `0, 4, 8, …` are examined; level `d` is accepted once
/// `(S_{d+4} − S_d) + (1 − tr ρ̃_d) ≤ tol`, where `S_d` is the absolute sum over
/// the `d`-truncated matrix. If no level up to `max_cutoff` qualifies, the
/// value at `max_cutoff` is returned with `converged = false`.
pub fn negativity_truncated(
    cm: &CovarianceMatrix,
    tol: f64,
    max_cutoff: usize,
) -> Result<NegativityResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let r = build_r_matrix(cm)?;
    let mut top = max_cutoff.min(FIRST_PASS_CUTOFF);
    loop {
        let sums = shell_sums(&r, top);
        let mut s = 0.0;
        let mut off = 0.0;
        let mut tr = 0.0;
        let mut cum = Vec::with_capacity(top + 1);
        for k in 0..=top {
            s += sums.l1[k];
            off += sums.off_diagonal[k];
            tr += sums.trace[k];
            cum.push((s, off, (1.0 - tr).max(0.0)));
        }
        let mut d = 0;
        while d + CUTOFF_STEP <= top {
            let (s_d, off_d, deficit) = cum[d];
            let tail = (cum[d + CUTOFF_STEP].0 - s_d) + deficit;
            if tail <= tol {
                return Ok(NegativityResult {
                    value: 0.5 * off_d,
                    cutoff_used: d,
                    tail_estimate: tail,
                    converged: true,
                });
            }
            d += CUTOFF_STEP;
        }
        if top == max_cutoff {
            let (s_top, off_top, deficit) = cum[top];
            let prev = top.saturating_sub(CUTOFF_STEP);
            return Ok(NegativityResult {
                value: 0.5 * off_top,
                cutoff_used: top,
                tail_estimate: (s_top - cum[prev].0) + deficit,
                converged: false,
            });
        }
        top = (2 * top).max(CUTOFF_STEP).min(max_cutoff);
    }
}

/// `½(e^{2r} − 1)`, the output negativity of a two-mode squeezed vacuum.
pub fn negativity_pure(r: f64) -> f64 {
    0.5 * (2.0 * r).exp_m1()
}

/// [`negativity_pure`] parameterised by the local mean photon number `sinh²r`.
pub fn negativity_pure_nbar(nbar: f64) -> f64 {
    negativity_pure(squeezing_for_mean_photons(nbar))
}

/// Output negativity of the coherent-mixture state with local mean photon
/// number `sigma2`:
/// `½{Σ_M s(M)⁻¹ [Σ_J √C(M,J)]² − 1}`, `s(M) = σ²(1/σ² + 2)^{M+1}`.
///
/// Summation stops once a geometric bound on the remaining terms drops below
/// `1e-10`; `SeriesNotConverged` if that does not happen within `terms`.
pub fn negativity_coherent_mixture(sigma2: f64, terms: usize) -> Result<f64> {
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(Error::InvalidInput(format!(
            "sigma2 must be >= 0, got {sigma2}"
        )));
    }
    if sigma2 == 0.0 {
        return Ok(0.0);
    }
    let lf = ln_factorials(terms);
    let ln_q = (1.0 / sigma2 + 2.0).ln();
    let ln_s0 = sigma2.ln();
    let ln_term = |m: usize| {
        let halves: Vec<f64> = (0..=m).map(|j| 0.5 * ln_binomial(&lf, m, j)).collect();
        let top = halves.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = top + halves.iter().map(|h| (h - top).exp()).sum::<f64>().ln();
        2.0 * lse - ln_s0 - (m as f64 + 1.0) * ln_q
    };
    let mut total = 0.0;
    let mut prev = ln_term(0);
    total += prev.exp();
    for m in 1..terms {
        let cur = ln_term(m);
        total += cur.exp();
        let ratio = (cur - prev).exp();
        if ratio < 1.0 && cur.exp() * ratio / (1.0 - ratio) < SERIES_TAIL_TOL {
            return Ok(0.5 * (total - 1.0));
        }
        prev = cur;
    }
    Err(Error::SeriesNotConverged { terms })
}

/// Husimi lower bound `½[(πe)² Φ(1, 1) − 1]` on the output negativity.
pub fn lower_bound(cm: &CovarianceMatrix) -> Result<BoundResult> {
    let r = build_r_matrix(cm)?;
    let one = Complex64::new(1.0, 0.0);
    let husimi_value = (PI * E).powi(2) * husimi_from_r(&r, one, one);
    Ok(BoundResult {
        lower_bound: 0.5 * (husimi_value - 1.0),
        husimi_value,
    })
}

/// `½[e^{2 tanh r}/cosh²r − 1]` with `sinh²r = nbar`.
pub fn lower_bound_pure(nbar: f64) -> f64 {
    let r = squeezing_for_mean_photons(nbar);
    let c = r.cosh();
    0.5 * ((2.0 * r.tanh()).exp() / (c * c) - 1.0)
}

/// `½[e^{4σ²/(2σ²+1)}/(2σ²+1) − 1]` with `σ² = nbar`.
pub fn lower_bound_coherent_mixture(nbar: f64) -> f64 {
    let k = 2.0 * nbar + 1.0;
    0.5 * ((4.0 * nbar / k).exp() / k - 1.0)
}

/// One-parameter families of standard-form states indexed by the local mean
/// photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFamily {
    Pure,
    CoherentMixture,
}

impl BoundFamily {
    pub fn lower_bound(self, nbar: f64) -> f64 {
        match self {
            BoundFamily::Pure => lower_bound_pure(nbar),
            BoundFamily::CoherentMixture => lower_bound_coherent_mixture(nbar),
        }
    }

    /// Closed-form output negativity of the family member.
    pub fn negativity(self, nbar: f64) -> Result<f64> {
        match self {
            BoundFamily::Pure => Ok(negativity_pure_nbar(nbar)),
            BoundFamily::CoherentMixture => negativity_coherent_mixture(nbar, DEFAULT_SERIES_TERMS),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundExtrema {
    pub argmax_nbar: f64,
    pub max_value: f64,
    /// Mean photon number beyond which the bound is negative.
    pub zero_crossing_nbar: f64,
}

/// Maximum (golden-section search) and positive zero crossing (bisection) of
/// the closed-form bound of `family`.
pub fn bound_extrema(family: BoundFamily) -> BoundExtrema {
    let f = |x: f64| family.lower_bound(x);
    let mut hi = 1.0;
    while f(hi) >= 0.0 {
        hi *= 2.0;
    }
    let argmax_nbar = golden_section_max(f, 0.0, hi, 1e-10);
    let zero_crossing_nbar = bisect(f, argmax_nbar, hi, 1e-12);
    BoundExtrema {
        argmax_nbar,
        max_value: f(argmax_nbar),
        zero_crossing_nbar,
    }
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Root of `f` in `[a, b]` assuming `f(a) > 0 > f(b)`.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if f(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_elements;
    use crate::gaussian::StandardFormParams;

    #[test]
    fn vacuum_converges_immediately() {
        let res = negativity_truncated(&CovarianceMatrix::vacuum(2), 1e-8, 36).unwrap();
        assert_eq!(res.value, 0.0);
        assert_eq!(res.cutoff_used, 0);
        assert!(res.converged);
    }

    #[test]
    fn pure_closed_form_values() {
        assert_eq!(negativity_pure(0.0), 0.0);
        assert!((negativity_pure(0.5) - 0.859141).abs() < 1e-6);
        assert!((negativity_pure_nbar(1.0) - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn tmsv_half_matches_closed_form() {
        let cm = StandardFormParams::two_mode_squeezed_vacuum(0.5)
            .assemble()
            .unwrap();
        let res = negativity_truncated(&cm, 1e-9, 64).unwrap();
        assert!(res.converged);
        assert!((res.value - negativity_pure(0.5)).abs() < 1e-8);
    }

    #[test]
    fn unconverged_reports_flag() {
        let cm = StandardFormParams::pure_with_mean_photons(3.0)
            .assemble()
            .unwrap();
        let res = negativity_truncated(&cm, 1e-8, 8).unwrap();
        assert!(!res.converged);
        assert_eq!(res.cutoff_used, 8);
        assert!(res.tail_estimate > 1e-8);
    }

    #[test]
    fn mixture_series_limits() {
        assert_eq!(negativity_coherent_mixture(0.0, 10).unwrap(), 0.0);
        assert!(negativity_coherent_mixture(-1.0, 10).is_err());
        assert_eq!(
            negativity_coherent_mixture(1.0, 3).unwrap_err(),
            Error::SeriesNotConverged { terms: 3 }
        );
    }

    #[test]
    fn bounds_at_zero_are_zero() {
        assert_eq!(lower_bound_pure(0.0), 0.0);
        assert_eq!(lower_bound_coherent_mixture(0.0), 0.0);
        let b = lower_bound(&CovarianceMatrix::vacuum(2)).unwrap();
        assert!(b.lower_bound.abs() < 1e-15);
        assert_eq!(b.lower_bound, 0.5 * (b.husimi_value - 1.0));
    }

    #[test]
    fn generic_bound_matches_closed_forms() {
        for nbar in [0.05, 0.3, 1.0, 4.0] {
            let p = StandardFormParams::pure_with_mean_photons(nbar)
                .assemble()
                .unwrap();
            let m = StandardFormParams::coherent_mixture(nbar)
                .assemble()
                .unwrap();
            assert!((lower_bound(&p).unwrap().lower_bound - lower_bound_pure(nbar)).abs() < 1e-12);
            assert!(
                (lower_bound(&m).unwrap().lower_bound - lower_bound_coherent_mixture(nbar)).abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn l1_of_tmsv_is_exponential() {
        let cm = StandardFormParams::two_mode_squeezed_vacuum(0.3)
            .assemble()
            .unwrap();
        let t = fock_elements(&cm, 20).unwrap();
        assert!((l1_norm(&t) - 0.6f64.exp()).abs() < 1e-6);
    }

    #[test]
    fn diagonal_state_has_no_off_diagonal_mass() {
        let th = CovarianceMatrix::thermal(0.4).unwrap();
        let t = fock_elements(&th.direct_sum(&CovarianceMatrix::thermal(0.7).unwrap()), 6).unwrap();
        assert_eq!(off_diagonal_l1(&t), 0.0);
        assert!((l1_norm(&t) - t.trace()).abs() < 1e-15);
    }

    #[test]
    fn extrema_are_ordered() {
        for fam in [BoundFamily::Pure, BoundFamily::CoherentMixture] {
            let e = bound_extrema(fam);
            assert!(e.max_value > 0.0);
            assert!(e.argmax_nbar < e.zero_crossing_nbar);
            assert!(fam.lower_bound(e.zero_crossing_nbar).abs() < 1e-9);
        }
    }
}
