mod common;

use common::{config, spectral_family};
use frechet_approx::{Atom, SpectralFunction};
use num_complex::Complex64;
use proptest::prelude::*;

fn point_in(f: &SpectralFunction, u: &[f64]) -> Vec<f64> {
    let b = f.domain();
    (0..f.dim()).map(|j| b.lower()[j] + u[j] * b.side(j)).collect()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn evaluation_is_linear(
        fg in spectral_family(2, 2, 16, 30.0),
        us in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 2), 100),
    ) {
        let sum = fg[0].add(&fg[1]).unwrap();
        let scale = 1.0 + fg[0].l1_amplitude() + fg[1].l1_amplitude();
        for u in &us {
            let x = point_in(&fg[0], u);
            let lhs = sum.evaluate(&x).unwrap();
            let rhs = fg[0].evaluate(&x).unwrap() + fg[1].evaluate(&x).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn canonical_form_evaluates_the_same(
        fs in spectral_family(1, 1, 16, 10.0),
        dup in prop::collection::vec((0usize..16, -1.0..1.0f64), 0..8),
        us in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 1), 50),
    ) {
        // repeat some frequencies so merging actually happens
        let f = &fs[0];
        let mut atoms = f.atoms().to_vec();
        for (i, a) in dup {
            let src = &f.atoms()[i % f.len()];
            atoms.push(Atom::new(Complex64::new(a, -a), src.frequency.clone()));
        }
        let f = SpectralFunction::new(f.domain().clone(), atoms).unwrap();
        let c = f.canonicalize();
        prop_assert!(c.len() <= f.len());
        for w in c.atoms().windows(2) {
            prop_assert!(w[0].frequency[0] < w[1].frequency[0]);
        }
        let tol = 1e-12 * (1.0 + f.l1_amplitude());
        for u in &us {
            let x = point_in(&f, u);
            prop_assert!((c.evaluate(&x).unwrap() - f.evaluate(&x).unwrap()).norm() <= tol);
        }
    }

    #[test]
    fn sampling_matches_pointwise_evaluation(fs in spectral_family(2, 1, 8, 20.0), n0 in 2usize..12, n1 in 2usize..12) {
        let f = &fs[0];
        let g = f.sample(&[n0, n1]).unwrap();
        for i in 0..n0 {
            for j in 0..n1 {
                let x = g.node(&[i, j]);
                prop_assert_eq!(g.get(&[i, j]), f.evaluate(&x).unwrap());
            }
        }
    }
}
