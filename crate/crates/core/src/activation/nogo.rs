use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    ppt_across, product_noise_compose, CovarianceMatrix, PptOutcome, ProductNoiseDecomposition,
    SymplecticMap, PSD_TOL,
};
use crate::linalg;

/// Witness that `γ_out ≥ γ₁ ⊕ γ₂` with both blocks bona fide, which makes
/// `γ_out` separable across `AB | A'B'`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityCertificate {
    pub gamma_1: CovarianceMatrix,
    pub gamma_2: CovarianceMatrix,
    /// `γ_out − γ₁ ⊕ γ₂`.
    pub residual: DMatrix<f64>,
    pub min_eigenvalue: f64,
}

impl SeparabilityCertificate {
    /// Fails with `CertificateFailed` if the residual has an eigenvalue below
    /// `−1e-10`.
    pub fn check(
        gamma_out: &CovarianceMatrix,
        gamma_1: &CovarianceMatrix,
        gamma_2: &CovarianceMatrix,
    ) -> Result<Self> {
        let sum = gamma_1.direct_sum(gamma_2);
        if sum.dim() != gamma_out.dim() {
            return Err(Error::DimensionMismatch {
                expected: gamma_out.dim(),
                found: sum.dim(),
            });
        }
        let residual = linalg::symmetrize(&(gamma_out.matrix() - sum.matrix()));
        let min_eigenvalue = linalg::min_symmetric_eigenvalue(&residual);
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::CertificateFailed { min_eigenvalue });
        }
        Ok(Self {
            gamma_1: gamma_1.clone(),
            gamma_2: gamma_2.clone(),
            residual,
            min_eigenvalue,
        })
    }
}

/// One instance of the Gaussian activation circuit: a separable input
/// `γ_A ⊕ γ_B + P`, local maps `S_A`, `S_B`, an ancilla pair `A'B'` and a global
/// four-mode map acting on `(A, B, A', B')`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoGoScenario {
    pub decomposition: ProductNoiseDecomposition,
    pub s_a: SymplecticMap,
    pub s_b: SymplecticMap,
    pub s_global: SymplecticMap,
    pub gamma_ancilla: CovarianceMatrix,
}

/// `A ↔ A'`, `B ↔ B'`.
pub fn ancilla_swap() -> SymplecticMap {
    SymplecticMap::mode_permutation(&[2, 3, 0, 1]).expect("valid permutation")
}

impl NoGoScenario {
    pub fn new(
        decomposition: ProductNoiseDecomposition,
        s_a: SymplecticMap,
        s_b: SymplecticMap,
        s_global: SymplecticMap,
        gamma_ancilla: CovarianceMatrix,
    ) -> Result<Self> {
        let s = Self {
            decomposition,
            s_a,
            s_b,
            s_global,
            gamma_ancilla,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let expect = |what: usize, modes: usize| {
            if what == modes {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: modes,
                    found: what,
                })
            }
        };
        expect(self.decomposition.gamma_a.modes(), 1)?;
        expect(self.decomposition.gamma_b.modes(), 1)?;
        expect(self.s_a.modes(), 1)?;
        expect(self.s_b.modes(), 1)?;
        expect(self.s_global.modes(), 4)?;
        expect(self.gamma_ancilla.modes(), 2)
    }

    /// Product input (`P = 0`) with identity local maps and the ancilla swap.
    pub fn product(
        gamma_a: &CovarianceMatrix,
        gamma_b: &CovarianceMatrix,
        gamma_ancilla: &CovarianceMatrix,
    ) -> Result<Self> {
        let (_, decomposition) = product_noise_compose(gamma_a, gamma_b, &DMatrix::zeros(4, 4))?;
        Self::new(
            decomposition,
            SymplecticMap::identity(1),
            SymplecticMap::identity(1),
            ancilla_swap(),
            gamma_ancilla.clone(),
        )
    }

    /// `L = S (S_A ⊕ S_B ⊕ 𝟙₂)`.
    pub fn total_map(&self) -> DMatrix<f64> {
        let local = self
            .s_a
            .direct_sum(&self.s_b)
            .direct_sum(&SymplecticMap::identity(2));
        self.s_global.matrix() * local.matrix()
    }

    /// Displacement on `(A, B, A', B')` produced by the classical vector `R`
    /// once the local displacements are moved behind the circuit:
    /// `S ((S_A ⊕ S_B) 𝒱 R ⊕ 0)`.
    pub fn relocated_displacement(&self, r: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(8);
        v.rows_mut(0, 4)
            .copy_from(&(&self.decomposition.noise_basis * r));
        self.total_map() * v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoGoOutcome {
    pub gamma_out: CovarianceMatrix,
    pub gamma_out_baseline: CovarianceMatrix,
    pub certificate: SeparabilityCertificate,
    /// PPT across `AB | A'B'`, a necessary condition reported alongside.
    pub ppt: PptOutcome,
}

/// Runs the circuit at covariance level. The classical displacements of the
/// input enter as the additive term `L (P ⊕ 0) Lᵀ`. The certificate pair is the
/// block-diagonal part of the baseline output, which is exact when the global
/// map keeps the product input a product across `AB | A'B'` (e.g. the swap).
pub fn nogo_run(scenario: &NoGoScenario) -> Result<NoGoOutcome> {
    nogo_run_with_certificate(scenario, None)
}

/// As [`nogo_run`], checking a caller-supplied pair `(γ₁, γ₂)` instead.
pub fn nogo_run_with_certificate(
    scenario: &NoGoScenario,
    certificate: Option<(&CovarianceMatrix, &CovarianceMatrix)>,
) -> Result<NoGoOutcome> {
    scenario.validate()?;
    let l = scenario.total_map();
    let conj = |m: &DMatrix<f64>| linalg::symmetrize(&(&l * m * l.transpose()));
    let base_in = scenario
        .decomposition
        .product()
        .direct_sum(&scenario.gamma_ancilla);
    let gamma_out_baseline = CovarianceMatrix::new(conj(base_in.matrix()))?;
    let noise = linalg::direct_sum(
        &scenario.decomposition.reconstructed_noise(),
        &DMatrix::zeros(4, 4),
    );
    let gamma_out = CovarianceMatrix::new(gamma_out_baseline.matrix() + conj(&noise))?;
    let certificate = match certificate {
        Some((g1, g2)) => SeparabilityCertificate::check(&gamma_out, g1, g2)?,
        None => {
            let g1 = gamma_out_baseline.reduced(&[0, 1])?;
            let g2 = gamma_out_baseline.reduced(&[2, 3])?;
            SeparabilityCertificate::check(&gamma_out, &g1, &g2)?
        }
    };
    let ppt = ppt_across(&gamma_out, &[0, 1])?;
    Ok(NoGoOutcome {
        gamma_out,
        gamma_out_baseline,
        certificate,
        ppt,
    })
}

/// Draws `samples` relocated displacement vectors with `R ~ N(0, diag λ)`.
pub fn sample_displacements<R: Rng + ?Sized>(
    scenario: &NoGoScenario,
    samples: usize,
    rng: &mut R,
) -> Vec<DVector<f64>> {
    let lam = &scenario.decomposition.noise_eigs;
    (0..samples)
        .map(|_| {
            let r = DVector::from_iterator(
                lam.len(),
                lam.iter().map(|l| {
                    let z: f64 = StandardNormal.sample(rng);
                    z * l.sqrt()
                }),
            );
            scenario.relocated_displacement(&r)
        })
        .collect()
}

/// Sample second moments `(1/n) Σ d dᵀ` of zero-mean displacements.
pub fn empirical_covariance(samples: &[DVector<f64>]) -> DMatrix<f64> {
    let n = samples.first().map_or(0, |s| s.len());
    let mut acc = DMatrix::zeros(n, n);
    for s in samples {
        acc += s * s.transpose();
    }
    acc / samples.len().max(1) as f64
}

fn random_local<R: Rng + ?Sized>(rng: &mut R) -> SymplecticMap {
    let a = SymplecticMap::rotation(rng.random_range(0.0..std::f64::consts::TAU));
    let s = SymplecticMap::squeezer(rng.random_range(-0.8..0.8));
    let b = SymplecticMap::rotation(rng.random_range(0.0..std::f64::consts::TAU));
    a.compose(&s)
        .and_then(|m| m.compose(&b))
        .expect("single-mode maps")
}

fn random_single_mode<R: Rng + ?Sized>(rng: &mut R) -> CovarianceMatrix {
    let thermal = CovarianceMatrix::thermal(rng.random_range(0.0..2.0)).expect("nbar >= 0");
    random_local(rng).apply(&thermal).expect("single-mode")
}

/// A random separable-by-construction scenario with the ancilla swap as the
/// global map. Noise is `G Gᵀ` for a Gaussian `G` of random rank `0..=4`.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R) -> NoGoScenario {
    let gamma_a = random_single_mode(rng);
    let gamma_b = random_single_mode(rng);
    let rank = rng.random_range(0..=4usize);
    let scale = rng.random_range(0.1..1.5);
    let g = DMatrix::from_fn(4, rank, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        z * scale
    });
    let noise = &g * g.transpose();
    let (_, decomposition) =
        product_noise_compose(&gamma_a, &gamma_b, &noise).expect("G Gᵀ is PSD");
    let anc_local = random_local(rng).direct_sum(&random_local(rng));
    let entangler = SymplecticMap::two_mode_squeezer(rng.random_range(0.0..1.0));
    let gamma_ancilla = anc_local
        .compose(&entangler)
        .and_then(|s| {
            let th = CovarianceMatrix::thermal(rng.random_range(0.0..1.0))?;
            s.apply(&th.direct_sum(&th))
        })
        .expect("two-mode maps");
    NoGoScenario {
        decomposition,
        s_a: random_local(rng),
        s_b: random_local(rng),
        s_global: ancilla_swap(),
        gamma_ancilla,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::StandardFormParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mixture_scenario(s2: f64) -> NoGoScenario {
        #[rustfmt::skip]
        let p = DMatrix::from_row_slice(4, 4, &[
            s2, 0.0, s2, 0.0,
            0.0, s2, 0.0, s2,
            s2, 0.0, s2, 0.0,
            0.0, s2, 0.0, s2,
        ]);
        let v = CovarianceMatrix::vacuum(1);
        let (cm, d) = product_noise_compose(&v, &v, &p).unwrap();
        assert_eq!(
            cm,
            StandardFormParams::coherent_mixture(s2).assemble().unwrap()
        );
        NoGoScenario::new(
            d,
            SymplecticMap::identity(1),
            SymplecticMap::identity(1),
            ancilla_swap(),
            CovarianceMatrix::vacuum(2),
        )
        .unwrap()
    }

    #[test]
    fn product_input_output_is_direct_sum() {
        let th = CovarianceMatrix::thermal(0.3).unwrap();
        let anc = StandardFormParams::two_mode_squeezed_vacuum(0.4)
            .assemble()
            .unwrap();
        let out = nogo_run(&NoGoScenario::product(&th, &th, &anc).unwrap()).unwrap();
        assert_eq!(out.gamma_out, out.gamma_out_baseline);
        assert!(linalg::max_abs(&out.certificate.residual) < 1e-15);
        assert_eq!(out.certificate.gamma_1, anc);
    }

    #[test]
    fn coherent_mixture_passes() {
        let out = nogo_run(&mixture_scenario(1.0)).unwrap();
        assert!(out.certificate.min_eigenvalue >= -1e-10);
        assert!(out.ppt.is_separable());
    }

    #[test]
    fn inflated_certificate_fails() {
        let sc = mixture_scenario(1.0);
        let big = CovarianceMatrix::thermal(3.0).unwrap();
        let g1 = big.direct_sum(&big);
        let g2 = CovarianceMatrix::vacuum(2);
        assert!(matches!(
            nogo_run_with_certificate(&sc, Some((&g1, &g2))),
            Err(Error::CertificateFailed { .. })
        ));
    }

    #[test]
    fn random_scenarios_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let out = nogo_run(&random_scenario(&mut rng)).unwrap();
            assert!(out.ppt.is_separable());
        }
    }

    #[test]
    fn scenario_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sc = random_scenario(&mut rng);
        let back: NoGoScenario =
            serde_json::from_str(&serde_json::to_string(&sc).unwrap()).unwrap();
        let (a, b) = (nogo_run(&sc).unwrap(), nogo_run(&back).unwrap());
        assert!(linalg::max_abs(&(a.gamma_out.matrix() - b.gamma_out.matrix())) < 1e-12);
    }

    #[test]
    fn sampled_displacements_reproduce_noise_term() {
        let sc = mixture_scenario(0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = sample_displacements(&sc, 40_000, &mut rng);
        let emp = empirical_covariance(&samples);
        let out = nogo_run(&sc).unwrap();
        let exact = out.gamma_out.matrix() - out.gamma_out_baseline.matrix();
        assert!(linalg::max_abs(&(emp - exact)) < 0.05);
    }

    #[test]
    fn wrong_shapes_rejected() {
        let sc = mixture_scenario(0.5);
        let bad = NoGoScenario {
            s_global: SymplecticMap::identity(3),
            ..sc
        };
        assert!(nogo_run(&bad).is_err());
    }
}
