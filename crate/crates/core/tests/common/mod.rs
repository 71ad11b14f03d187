#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cvact::gaussian::{CovarianceMatrix, StandardFormParams, SymplecticMap};

pub fn random_local(rng: &mut ChaCha8Rng) -> SymplecticMap {
    let a = SymplecticMap::rotation(rng.random_range(0.0..6.3));
    let s = SymplecticMap::squeezer(rng.random_range(-0.5..0.5));
    let b = SymplecticMap::rotation(rng.random_range(0.0..6.3));
    a.compose(&s).unwrap().compose(&b).unwrap()
}

/// Thermal pair pushed through local maps, a beam splitter and a two-mode squeezer.
pub fn random_two_mode(rng: &mut ChaCha8Rng) -> CovarianceMatrix {
    let th = CovarianceMatrix::thermal(rng.random_range(0.0..0.6))
        .unwrap()
        .direct_sum(&CovarianceMatrix::thermal(rng.random_range(0.0..0.6)).unwrap());
    let s = random_local(rng)
        .direct_sum(&random_local(rng))
        .compose(&SymplecticMap::beam_splitter(rng.random_range(0.0..1.5)))
        .unwrap()
        .compose(&SymplecticMap::two_mode_squeezer(
            rng.random_range(0.0..0.4),
        ))
        .unwrap()
        .compose(&random_local(rng).direct_sum(&random_local(rng)))
        .unwrap();
    s.apply(&th).unwrap()
}

/// Bona fide standard-form parameters with local photon numbers below `nbar_max`.
pub fn random_standard_form(rng: &mut ChaCha8Rng, nbar_max: f64) -> StandardFormParams {
    loop {
        let a = 0.5 + rng.random_range(0.0..nbar_max);
        let b = 0.5 + rng.random_range(0.0..nbar_max);
        let cmax = ((a + 0.5) * (b + 0.5)).sqrt();
        let c1 = rng.random_range(0.0..cmax);
        let c2 = rng.random_range(-c1..=c1);
        let p = StandardFormParams::new(a, b, c1, c2);
        if p.assemble().is_ok() {
            return p;
        }
    }
}
