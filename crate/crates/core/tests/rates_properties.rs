mod common;

use std::collections::BTreeMap;

use common::config;
use frechet_approx::rates::{
    fit_rate, width_bandlimited, width_bounded, width_exp_barron, width_monotonic, GrowthSequence, RateFamily,
    RateFunction,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn rates() -> impl Strategy<Value = RateFunction> {
    prop_oneof![
        (0.1..10.0f64, 0.05..3.0f64).prop_map(|(c, r)| RateFunction::power(c, r).unwrap()),
        (0.1..10.0f64, 0.01..2.0f64, 0.1..1.0f64).prop_map(|(b, c, g)| RateFunction::stretched_exp(b, c, g).unwrap()),
    ]
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn inverse_undoes_eval_on_log_spaced_values(r in rates()) {
        let top = r.max_value();
        for k in 0..1000 {
            // y from top down to top * 1e-12
            let y = top * 10f64.powf(-12.0 * k as f64 / 999.0);
            let n = r.inverse(y).unwrap();
            prop_assert!(n >= 1.0);
            prop_assert!((r.eval(n) - y).abs() <= 1e-9 * y, "y={y} n={n}");
        }
    }

    #[test]
    fn eval_is_inverted_on_widths(r in rates(), n in 1.0..1e6f64) {
        let y = r.eval(n);
        prop_assume!(y > 1e-300);
        let back = r.inverse(y).unwrap();
        prop_assert!((back - n).abs() <= 1e-9 * n, "{back} vs {n}");
    }

    #[test]
    fn widths_are_monotone(
        e1 in 0.001..1.0f64,
        e2 in 0.001..1.0f64,
        c1 in 0.01..100.0f64,
        c2 in 0.01..100.0f64,
        m1 in 1.0..10.0f64,
        m2 in 1.0..10.0f64,
        omega in 0.0..5.0f64,
        r in rates(),
    ) {
        let (e_lo, e_hi) = (e1.min(e2), e1.max(e2));
        let (c_lo, c_hi) = (c1.min(c2), c1.max(c2));
        let (m_lo, m_hi) = (m1.min(m2), m1.max(m2));
        let cm = |m: f64| GrowthSequence::Constant { m };

        let n = |e: f64, c: f64, m: f64| width_bounded(e, c, &cm(m), &r).unwrap().n_sufficient;
        prop_assert!(n(e_lo, c_lo, m_lo) >= n(e_hi, c_lo, m_lo));
        prop_assert!(n(e_lo, c_lo, m_lo) <= n(e_lo, c_hi, m_lo));
        prop_assert!(n(e_lo, c_lo, m_lo) <= n(e_lo, c_lo, m_hi));

        let all: BTreeMap<u32, RateFunction> = (1..=12).map(|l| (l, r)).collect();
        let n = |e: f64, c: f64, m: f64| width_monotonic(e, c, &cm(m), &all).unwrap().n_sufficient;
        prop_assert!(n(e_lo, c_lo, m_lo) >= n(e_hi, c_lo, m_lo));
        prop_assert!(n(e_lo, c_lo, m_lo) <= n(e_lo, c_hi, m_lo));
        prop_assert!(n(e_lo, c_lo, m_lo) <= n(e_lo, c_lo, m_hi));

        let n = |e: f64, c: f64, o: f64| width_bandlimited(e, c, o).unwrap().n_sufficient;
        prop_assert!(n(e_lo, c_lo, omega) >= n(e_hi, c_lo, omega));
        prop_assert!(n(e_lo, c_lo, omega) <= n(e_lo, c_hi, omega));
        prop_assert!(n(e_lo, c_lo, omega) <= n(e_lo, c_lo, omega + 1.0));

        let n = |e: f64, c: f64| width_exp_barron(e, c, 1.0, 1.0, 0.5, 1).unwrap().n_sufficient;
        prop_assert!(n(e_lo, c_lo) >= n(e_hi, c_lo));
        prop_assert!(n(e_lo, c_lo) <= n(e_lo, c_hi));

        for w in [n(e_lo, c_lo), n(e_hi, c_hi)] {
            prop_assert!(w >= 1);
        }
    }
}

#[test]
fn noisy_monte_carlo_data_recovers_the_exponent() {
    let widths: Vec<f64> = (3..=9).map(|k| 2f64.powi(k)).collect();
    let noise = Normal::new(0.0, 0.05).unwrap();
    let seeds = 1000;
    let mut inside = 0;
    for seed in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<(f64, f64)> = widths.iter().map(|&n| (n, n.powf(-0.5) * (1.0f64 + noise.sample(&mut rng)).max(1e-3))).collect();
        let fit = fit_rate(&pts, RateFamily::Power).unwrap();
        if let RateFunction::Power { r, .. } = fit.rate {
            if (0.4..=0.6).contains(&r) {
                inside += 1;
            }
        }
    }
    assert!(inside as f64 >= 0.95 * seeds as f64, "{inside} of {seeds}");
}
