mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cvact::fock::{build_r_matrix, fock_elements, standard_form_r_matrix};
use cvact::gaussian::{CovarianceMatrix, StandardFormParams};
use cvact::linalg::{blockwise_inverse, hermitian_eigenvalues, max_abs};
use cvact::special::ln_factorials;

#[test]
fn squeezed_vacuum_elements_match_closed_form() {
    for r in [0.1, 0.45, 0.8] {
        let cm = StandardFormParams::two_mode_squeezed_vacuum(r)
            .assemble()
            .unwrap();
        let t = fock_elements(&cm, 15).unwrap();
        let th: f64 = r.tanh();
        for m1 in 0..=15 {
            for m2 in 0..=15 {
                for n1 in 0..=15 {
                    for n2 in 0..=15 {
                        let expect = if m1 == m2 && n1 == n2 {
                            (1.0 - th * th) * th.powi((m1 + n1) as i32)
                        } else {
                            0.0
                        };
                        let got = t.get(m1, m2, n1, n2).unwrap();
                        assert!(
                            (got - Complex64::new(expect, 0.0)).norm() < 1e-10,
                            "r={r} ({m1},{m2},{n1},{n2}): {got} vs {expect}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn coherent_mixture_elements_match_p_function_integral() {
    let lf = ln_factorials(40);
    for s2 in [0.1, 0.5, 1.0] {
        let cm = StandardFormParams::coherent_mixture(s2).assemble().unwrap();
        let t = fock_elements(&cm, 15).unwrap();
        let s = |j: usize| s2 * (1.0 / s2 + 2.0).powi(j as i32 + 1);
        for m1 in 0..=15 {
            for m2 in 0..=15 {
                for n1 in 0..=15 {
                    for n2 in 0..=15 {
                        let expect = if m1 + m2 == n1 + n2 {
                            let ln = lf[m1 + m2] - 0.5 * (lf[m1] + lf[m2] + lf[n1] + lf[n2]);
                            ln.exp() / s(m1 + m2)
                        } else {
                            0.0
                        };
                        let got = t.get(m1, m2, n1, n2).unwrap();
                        assert!((got - Complex64::new(expect, 0.0)).norm() < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn random_states_are_hermitian_with_subnormalised_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let cm = common::random_two_mode(&mut rng);
        let t = fock_elements(&cm, 12).unwrap();
        assert!(t.hermiticity_error() <= 1e-12);
        for m1 in 0..=12 {
            for m2 in 0..=12 {
                let z = t.get(m1, m2, m1, m2).unwrap();
                assert!(z.re >= -1e-12 && z.im.abs() <= 1e-12);
            }
        }
        assert!(t.trace_deficit > -1e-9 && t.trace_deficit < 1.0);
    }
}

#[test]
fn truncated_matrix_is_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5 {
        let cm = common::random_two_mode(&mut rng);
        let m = fock_elements(&cm, 10).unwrap().to_matrix();
        let ev = hermitian_eigenvalues(&m);
        assert!(ev[0] >= -1e-8, "min eigenvalue {}", ev[0]);
    }
}

#[test]
fn trace_deficit_decreases_with_cutoff() {
    let cm = StandardFormParams::coherent_mixture(0.5)
        .assemble()
        .unwrap();
    let mut last = 1.0;
    for d in [0, 5, 10, 20, 30] {
        let def = fock_elements(&cm, d).unwrap().trace_deficit;
        assert!(def <= last + 1e-15);
        last = def;
    }
    assert!(last <= 1e-6);
}

#[test]
fn r_matrix_generic_equals_standard_form_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let p = common::random_standard_form(&mut rng, 3.0);
        let generic = build_r_matrix(&p.assemble().unwrap()).unwrap();
        let closed = standard_form_r_matrix(&p);
        let diff = (generic.entries - closed.entries)
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(diff <= 1e-12, "{p:?}: {diff}");
        assert!((generic.det_factor - closed.det_factor).abs() <= 1e-12 * closed.det_factor);
        assert!(generic.entries.iter().all(|z| z.im.abs() <= 1e-12));
    }
}

#[test]
fn r_matrix_is_symmetric_for_general_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let r = build_r_matrix(&common::random_two_mode(&mut rng)).unwrap();
        assert!(r.asymmetry() <= 1e-12);
    }
}

#[test]
fn blockwise_inverse_of_shifted_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let cm = common::random_two_mode(&mut rng);
        let g = cm.matrix() + DMatrix::identity(4, 4) * 0.5;
        let (a, b, c) = CovarianceMatrix::new(g.clone())
            .unwrap()
            .blocks(&[0])
            .unwrap();
        let inv = blockwise_inverse(&a, &c, &b).unwrap();
        let direct = g.try_inverse().unwrap();
        assert!(max_abs(&(inv - direct)) <= 1e-10);
    }
}
