#![allow(dead_code)]

use frechet_approx::{Atom, BoxDomain, SpectralFunction};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_2024),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn boxes(d: usize) -> impl Strategy<Value = BoxDomain> {
    (prop::collection::vec(-1.0..1.0f64, d), prop::collection::vec(0.5..2.0f64, d)).prop_map(|(lo, side)| {
        let hi: Vec<f64> = lo.iter().zip(&side).map(|(a, s)| a + s).collect();
        BoxDomain::new(lo, hi).unwrap()
    })
}

pub fn amplitude() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn atoms(d: usize, max_atoms: usize, max_freq: f64) -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec(
        (amplitude(), prop::collection::vec(-max_freq..max_freq, d)).prop_map(|(a, w)| Atom::new(a, w)),
        1..=max_atoms,
    )
}

/// Random atom sum on a random box.
pub fn spectral(d: usize, max_atoms: usize, max_freq: f64) -> impl Strategy<Value = SpectralFunction> {
    (boxes(d), atoms(d, max_atoms, max_freq)).prop_map(|(b, a)| SpectralFunction::new(b, a).unwrap())
}

/// Several atom sums sharing one random box.
pub fn spectral_family(
    d: usize,
    count: usize,
    max_atoms: usize,
    max_freq: f64,
) -> impl Strategy<Value = Vec<SpectralFunction>> {
    (boxes(d), prop::collection::vec(atoms(d, max_atoms, max_freq), count))
        .prop_map(|(b, list)| list.into_iter().map(|a| SpectralFunction::new(b.clone(), a).unwrap()).collect())
}

/// Composite Simpson rule with `2 m` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let n = 2 * m;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    s * h / 3.0
}
