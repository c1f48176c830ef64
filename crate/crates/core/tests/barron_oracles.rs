mod common;

use std::f64::consts::PI;

use common::{config, simpson};
use frechet_approx::barron::{
    barron_bl_norm, barron_bl_norm_with, barron_norm, check_embedding, counterexample_lower_bound,
    gaussian_bound_ratios, multiplier::apply_multiplier, multiplier::FnSymbol, BarronWeight, BlNormConfig,
    FourierProfile, GaussianTerm,
};
use frechet_approx::{BoxDomain, Differentiable, GridFunction, MultiIndex};
use num_complex::Complex64;
use proptest::prelude::*;

/// Trapezoid rule with `n` intervals.
fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for k in 1..n {
        s += f(a + k as f64 * h);
    }
    s * h
}

#[test]
fn weighted_gaussian_norm_matches_trapezoid() {
    // transform of exp(-x^2) is exp(-xi^2 / 4) / sqrt(2)
    let w = BarronWeight::new(1.0, 0.5).unwrap();
    let oracle = 2.0 * trapezoid(|xi| (-xi * xi / 4.0 + xi.sqrt()).exp() / 2f64.sqrt(), 0.0, 60.0, 10_000_000);
    let v = barron_norm(&FourierProfile::gaussian(1.0, 1), &w).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-6, "{v} vs {oracle}");
}

#[test]
fn weighted_gaussian_norm_in_two_dimensions_matches_radial_trapezoid() {
    // |xi|-radial integrand: 2 pi r (1/2) exp(-r^2/4) exp(r^{1/2} / 2)
    let w = BarronWeight::new(0.5, 0.5).unwrap();
    let oracle = trapezoid(|r| PI * r * (-r * r / 4.0 + 0.5 * r.sqrt()).exp(), 0.0, 60.0, 2_000_000);
    let v = barron_norm(&FourierProfile::gaussian(1.0, 2), &w).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-6, "{v} vs {oracle}");
}

#[test]
fn weighted_raised_cosine_norm_matches_trapezoid() {
    let w = BarronWeight::new(1.0, 0.5).unwrap();
    let oracle = 2.0 * trapezoid(|xi| 0.5 * (1.0 + xi.cos()) * xi.sqrt().exp(), 0.0, PI, 10_000_000);
    let v = barron_norm(&FourierProfile::raised_cosine(PI, 1), &w).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-6, "{v} vs {oracle}");
}

/// Inverse transform of the raised cosine on `[-omega, omega]`, in closed form.
fn raised_cosine_spatial(w: f64, omega: f64) -> f64 {
    let a = PI / omega;
    let s = |u: f64| if u.abs() < 1e-12 { omega } else { (u * omega).sin() / u };
    let v = if w.abs() > 2.0 * a {
        -a * a * (w * omega).sin() / (w * (w * w - a * a))
    } else {
        s(w) + 0.5 * s(w + a) + 0.5 * s(w - a)
    };
    v / (2.0 * PI).sqrt()
}

#[test]
fn bandlimited_norm_matches_closed_form_transform() {
    let omega = PI;
    let half = PI / omega;
    let cells = 20_000;
    // integrate between the zeros of sin(w omega) so every panel is smooth
    let mut total = 0.0;
    for k in 0..cells {
        let (a, b) = (k as f64 * half, (k + 1) as f64 * half);
        total += simpson(|w| (1.0 + w) * raised_cosine_spatial(w, omega).abs(), a, b, 32);
    }
    // |g| ~ a^2 |sin| / ((2 pi)^{1/2} w^3) beyond the cut, and |sin| averages to 2/pi
    let cut = cells as f64 * half;
    let a2 = (PI / omega).powi(2);
    total += a2 * (2.0 / PI) / cut / (2.0 * PI).sqrt();
    let oracle = 2.0 * total;
    let v = barron_bl_norm(&FourierProfile::raised_cosine(omega, 1)).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-4, "{v} vs {oracle}");
}

#[test]
fn bandlimited_norm_is_resolution_converged() {
    let p = FourierProfile::raised_cosine(PI, 1);
    let cfg = BlNormConfig::for_dim(1);
    let a = barron_bl_norm_with(&p, &cfg).unwrap();
    let b = barron_bl_norm_with(&p, &cfg.doubled()).unwrap();
    assert!((a / b - 1.0).abs() < 1e-4, "{a} vs {b}");
}

#[test]
fn bandlimited_norm_is_homogeneous() {
    let p = FourierProfile::raised_cosine(2.0, 1);
    let cfg = BlNormConfig { padding: 32.0, points_per_axis: 1 << 16 };
    let base = barron_bl_norm_with(&p, &cfg).unwrap();
    for c in [-3.0, 0.25, 7.5] {
        let v = barron_bl_norm_with(&p.scaled(c), &cfg).unwrap();
        assert!((v - c.abs() * base).abs() <= 1e-12 * c.abs() * base);
    }
}

/// Mixtures with independent centres in 1D and a shared centre otherwise.
fn gaussian_mixtures(d: usize) -> impl Strategy<Value = FourierProfile> {
    (
        prop::collection::vec((0.1..2.0f64, 0.2..4.0f64, prop::collection::vec(-1.0..1.0f64, d)), 1..=3),
        prop::collection::vec(-1.0..1.0f64, d),
    )
        .prop_map(move |(terms, shared)| FourierProfile::Gaussian {
            terms: terms
                .into_iter()
                .map(|(weight, a, own)| GaussianTerm { weight, a, center: if d == 1 { own } else { shared.clone() } })
                .collect(),
        })
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn barron_norm_is_homogeneous(p in gaussian_mixtures(1), c in -5.0..5.0f64, wc in 0.0..2.0f64, beta in 0.2..0.9f64) {
        let w = BarronWeight::new(wc, beta).unwrap();
        let base = barron_norm(&p, &w).unwrap();
        let v = barron_norm(&p.scaled(c), &w).unwrap();
        prop_assert!((v - c.abs() * base).abs() <= 1e-12 * c.abs() * base + 1e-300);
    }

    #[test]
    fn barron_norm_grows_with_the_weight(p in gaussian_mixtures(1), c1 in 0.0..2.0f64, c2 in 0.0..2.0f64, beta in 0.2..0.9f64) {
        let lo = barron_norm(&p, &BarronWeight::new(c1.min(c2), beta).unwrap()).unwrap();
        let hi = barron_norm(&p, &BarronWeight::new(c1.max(c2), beta).unwrap()).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn sup_norm_is_bounded_by_the_unweighted_norm(
        d in 1usize..=2,
        p1 in gaussian_mixtures(1),
        p2 in gaussian_mixtures(2),
        xs in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 2), 20),
    ) {
        let p = if d == 1 { p1 } else { p2 };
        let bound = (2.0 * PI).powf(-0.5 * d as f64) * barron_norm(&p, &BarronWeight::unit()).unwrap();
        for x in &xs {
            let v = Differentiable::value(&p, &x[..d]).norm();
            prop_assert!(v <= bound * (1.0 + 1e-10), "{v} > {bound}");
        }
    }

    #[test]
    fn multipliers_compose(
        coeffs in prop::collection::vec(common::amplitude(), 64),
        a in -2.0..2.0f64,
        b in 0.0..1.0f64,
        s in 0.5..3.0f64,
    ) {
        let dom = BoxDomain::cube(1, 0.0, 2.0 * PI).unwrap();
        let u = GridFunction::new(dom, vec![64], coeffs).unwrap();
        let m1 = move |xi: &[f64]| Complex64::new(a, xi[0]);
        let m2 = move |xi: &[f64]| Complex64::new((-b * xi[0] * xi[0]).exp(), 0.0) * s;
        let both = FnSymbol { dim: 1, f: move |xi: &[f64]| m1(xi) * m2(xi) };
        let step = apply_multiplier(&FnSymbol { dim: 1, f: m1 }, &apply_multiplier(&FnSymbol { dim: 1, f: m2 }, &u).unwrap()).unwrap();
        let once = apply_multiplier(&both, &u).unwrap();
        let scale = 1.0 + u.samples().iter().map(|v| v.norm()).fold(0.0, f64::max) * 64.0 * s * (a.abs() + 32.0);
        for (x, y) in step.samples().iter().zip(once.samples()) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }
}

#[test]
fn counterexample_bound_diverges() {
    let w = BarronWeight::new(2.0, 0.5).unwrap();
    let vol = 2.0 * PI;
    assert!(counterexample_lower_bound(1 << 10, &w, vol).unwrap().value > 1e3);
    assert!(counterexample_lower_bound(1 << 20, &w, vol).unwrap().value > 1e6);
    let mut prev = 0.0;
    for k in 0..=20 {
        let b = counterexample_lower_bound(1 << k, &w, vol).unwrap();
        if !b.trivial {
            assert!(b.value >= prev, "n = 2^{k}");
            prev = b.value;
        }
    }
    // hand evaluation at n = 64: m = floor(8 * 2 * 0.5) = 8
    let b = counterexample_lower_bound(64, &w, vol).unwrap();
    let hand = vol.powf(-0.5) * (((1.0 / ((2.0 * PI).sqrt() * 8.0)) * 7f64.exp()).powi(2));
    assert!((b.value / hand - 1.0).abs() < 1e-12);
}

#[test]
fn embedding_bound_holds_for_the_gaussian() {
    let w = BarronWeight::new(1.0, 0.5).unwrap();
    let dom = BoxDomain::cube(1, -1.0, 1.0).unwrap();
    let r = check_embedding(&FourierProfile::gaussian(1.0, 1), &w, 6, &dom, 2001).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.smallest_constant <= 1.0);

    let zero = FourierProfile::gaussian(1.0, 1).scaled(0.0);
    let r = check_embedding(&zero, &w, 6, &dom, 101).unwrap();
    assert_eq!(r.violations, 0);
    assert_eq!(r.smallest_constant, 0.0);
}

#[test]
fn gaussian_derivative_ratios_against_direct_hermite_values() {
    // |d^n e^{-x^2}| / e^{-x^2} = |H_n(x)|; at x = 1: H_2 = 2, H_3 = -4, H_4 = -20
    let dom = BoxDomain::cube(1, -1.0, 1.0).unwrap();
    for k in [frechet_approx::barron::CHARLIER_CONSTANT, 2.0] {
        let rows = gaussian_bound_ratios(&dom, 4, k, 3);
        for (alpha, ratio) in rows {
            let n = alpha.order();
            let h_max: f64 = [1.0f64, 2.0, 2.0, 4.0, 20.0][n as usize].max(if n == 4 { 12.0 } else { 0.0 });
            let bound = frechet_approx::barron::gaussian_hermite_bound(&alpha, &[1.0], k);
            assert!((ratio - h_max / bound).abs() < 1e-12 * (h_max / bound), "n={n}");
            assert!(ratio <= 1.0);
        }
    }
    let g = FourierProfile::gaussian(1.0, 1);
    let v = g.derivative(&MultiIndex(vec![3]), &[1.0]).re;
    assert!((v - 4.0 * (-1f64).exp()).abs() < 1e-14);
}
