use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex;
use proptest::prelude::*;

use css_purify::oracle::{self, DyadState};
use css_purify::{
    apply_loss, detection_ratio, optimal_k, purified_fraction, purify, success_region, theta_of_k,
    ChannelSetting, CssParams, MixedCss, TapSetting,
};

fn params() -> impl Strategy<Value = CssParams> {
    (0.05f64..2.0, 0.0f64..2.0 * PI)
        .prop_map(|(a, phi)| CssParams::new(a, phi).unwrap())
        .prop_filter("non-degenerate", |p| css_purify::normalization(p) > 1e-2)
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn loss_composes(params in params(), p in 0.0f64..=1.0, e1 in 0.01f64..1.0, e2 in 0.01f64..1.0) {
        let s = MixedCss::new(params, p).unwrap();
        let two = apply_loss(&apply_loss(&s, &ChannelSetting::new(e2).unwrap()).unwrap(), &ChannelSetting::new(e1).unwrap()).unwrap();
        let one = apply_loss(&s, &ChannelSetting::new(e1 * e2).unwrap()).unwrap();
        prop_assert!((two.alpha() - one.alpha()).abs() < 1e-12);
        prop_assert!((two.phi() - one.phi()).abs() < 1e-12);
        prop_assert!((two.p() - one.p()).abs() < 1e-12);
    }

    #[test]
    fn loss_never_raises_the_fraction(params in params(), p in 0.0f64..=1.0, eta in 0.01f64..1.0) {
        let out = apply_loss(&MixedCss::new(params, p).unwrap(), &ChannelSetting::new(eta).unwrap()).unwrap();
        prop_assert!(out.p() <= p + 1e-12);
    }

    #[test]
    fn pure_and_mixture_are_fixed_points(params in params(), t in 0.05f64..0.95, k in -3.0f64..3.0) {
        let tap = TapSetting::new(t, k).unwrap();
        prop_assert_eq!(purify(&MixedCss::new(params, 0.0).unwrap(), &tap).unwrap().state.p(), 0.0);
        prop_assert!((purify(&MixedCss::new(params, 1.0).unwrap(), &tap).unwrap().state.p() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn purification_is_monotone_in_ratio(p in 0.01f64..0.99, r1 in 0.01f64..5.0, dr in 1e-3f64..1.0) {
        prop_assert!(purified_fraction(p, r1) > purified_fraction(p, r1 + dr));
        prop_assert!((purified_fraction(p, 1.0) - p).abs() < 1e-15);
    }

    #[test]
    fn ratio_is_smallest_at_cancelling_phase(params in params(), t in 0.05f64..0.95, theta in 0.0f64..2.0 * PI) {
        let best = detection_ratio(&params, t, -params.phi()).unwrap();
        prop_assert!(best <= detection_ratio(&params, t, theta).unwrap() + 1e-12);
    }

    #[test]
    fn success_region_matches_ratio(params in params(), t in 0.05f64..0.95, theta in 0.0f64..2.0 * PI) {
        let region = success_region(&params, 1.0 - t).unwrap();
        let ratio = detection_ratio(&params, t, theta).unwrap();
        if (ratio - 1.0).abs() > 1e-9 {
            prop_assert_eq!(region.contains(theta), ratio < 1.0);
        }
    }

    #[test]
    fn optimal_k_cancels_phase(params in params(), t in 0.05f64..0.95) {
        let r = 1.0 - t;
        let k = optimal_k(&params, r).unwrap();
        let residual = (params.phi() + theta_of_k(k, params.alpha(), r)).rem_euclid(2.0 * PI);
        prop_assert!(residual.min(2.0 * PI - residual) < 1e-9);
        let period = PI / ((2.0 * r).sqrt() * params.alpha());
        prop_assert!(k.abs() <= period / 2.0 + 1e-12);
    }

    #[test]
    fn momentum_phase_identity(beta in -2.0f64..2.0, x in -3.0f64..3.0) {
        let lhs = oracle::homodyne_amplitude(c(-beta, 0.0), x, FRAC_PI_2);
        let rhs = Complex::from_polar(1.0, 2.0 * SQRT_2 * x * beta) * oracle::homodyne_amplitude(c(beta, 0.0), x, FRAC_PI_2);
        prop_assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn channels_preserve_trace_and_hermiticity(params in params(), p in 0.0f64..=1.0, eta in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let rho = oracle::make_mixed(&MixedCss::new(params, p).unwrap()).unwrap();
        let lossy = oracle::loss_on_dyad(&rho, 0, eta).unwrap();
        prop_assert!((lossy.trace() - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(lossy.is_hermitian(1e-12));
        let split = oracle::bs_on_product(&lossy.tensor(&DyadState::vacuum(1).unwrap()), (0, 1), t).unwrap();
        prop_assert!((split.trace() - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(split.is_hermitian(1e-12));
    }

    #[test]
    fn lossy_states_pass_positivity_probes(
        params in params(),
        p in 0.0f64..=1.0,
        eta in 0.0f64..=1.0,
        probe in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0), 1..4),
    ) {
        let rho = oracle::loss_on_dyad(&oracle::make_mixed(&MixedCss::new(params, p).unwrap()).unwrap(), 0, eta).unwrap();
        let psi: Vec<_> = probe.iter().map(|(re, im, wr, wi)| (c(*wr, *wi), vec![c(*re, *im)])).collect();
        let v = rho.expectation(&psi);
        prop_assert!(v.re > -1e-12, "negative expectation {v}");
        prop_assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn purification_agrees_with_simulator(params in params(), p in 0.0f64..=1.0, t in 0.05f64..0.95, k in -2.0f64..2.0) {
        let state = MixedCss::new(params, p).unwrap();
        let tap = TapSetting::new(t, k).unwrap();
        let analytic = purify(&state, &tap).unwrap();
        let sim = oracle::purify_sim(&state, &tap).unwrap();
        prop_assert!((analytic.state.p() - sim.state.p()).abs() < 1e-10);
        prop_assert!((analytic.state.alpha() - sim.state.alpha()).abs() < 1e-10);
        prop_assert!((analytic.acceptance_density(p) - sim.density).abs() < 1e-10);
    }

    #[test]
    fn single_precision_tracks_double(alpha in 0.3f64..2.0, p in 0.0f64..=1.0, eta in 0.1f64..1.0) {
        let d = apply_loss(&MixedCss::new(CssParams::new(alpha, 0.0).unwrap(), p).unwrap(), &ChannelSetting::new(eta).unwrap()).unwrap();
        let s = apply_loss(
            &MixedCss::new(CssParams::new(alpha as f32, 0.0).unwrap(), p as f32).unwrap(),
            &ChannelSetting::new(eta as f32).unwrap(),
        ).unwrap();
        prop_assert!((d.p() - s.p() as f64).abs() < 1e-5);
    }
}

#[test]
fn amplifier_tends_to_squared_fraction() {
    for p in [0.1f64, 0.5, 0.9] {
        for plus in [true, false] {
            let out = css_purify::amplified_fraction(p, 3.0, plus);
            assert!((out - p * p).abs() < 1e-3, "p = {p}, plus = {plus}: {out}");
        }
    }
}
