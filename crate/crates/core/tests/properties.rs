use num_complex::Complex64;
use probe_core::bounds::{optimize_operating_point, rel_error_bound};
use probe_core::channel::{output_family, qfi_closed_form};
use probe_core::gaussian::{fidelity, qfi_numeric, QfiOptions};
use probe_core::mode_splitter::{apply_mode_bs, commutator, make_input, vacuum_partner, ModeVector};
use probe_core::overlap::{overlap, overlap_deficit, redshift_delta};
use probe_core::{BoundQuery, ChannelConfig, GaussianProbe, GeoConfig, ProfileFamily, ProfileSpec, QuadPair};
use proptest::prelude::*;

fn quad_pair() -> impl Strategy<Value = QuadPair> {
    (0.05f64..20.0, 0.0f64..5.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(v, excess, x, p)| {
        // v_minus = excess + 1/v keeps v_plus·v_minus >= 1
        QuadPair::new(v, excess + 1.0 / v, x, p).unwrap()
    })
}

fn family() -> impl Strategy<Value = ProfileFamily> {
    prop_oneof![Just(ProfileFamily::Gaussian), Just(ProfileFamily::Rect), Just(ProfileFamily::TanhRect)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fidelity_is_symmetric_and_bounded(s1 in quad_pair(), s2 in quad_pair()) {
        let f12 = fidelity(&s1, &s2).unwrap();
        let f21 = fidelity(&s2, &s1).unwrap();
        prop_assert!(f12 > 0.0 && f12 <= 1.0 + 1e-12, "{f12}");
        prop_assert!((f12 - f21).abs() <= 1e-12 * f12.max(1e-300));
        prop_assert_eq!(fidelity(&s1, &s1).unwrap(), 1.0);
    }

    #[test]
    fn photon_bookkeeping(n in 0.01f64..1e4, y in 0.0f64..=1.0) {
        let p = GaussianProbe::from_photons(n, y).unwrap();
        prop_assert!((p.mean_photons() - n).abs() <= 1e-9 * n);
        prop_assert!((p.squeezing_fraction() - y).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_qfi_matches_bures_oracle(
        t in 0.05f64..=1.0,
        theta in 0.3f64..0.99,
        r in 0.0f64..1.5,
        alpha in 0.0f64..5.0,
    ) {
        let probe = GaussianProbe::new(alpha, 0.0, r).unwrap();
        let closed = qfi_closed_form(&ChannelConfig::lossy(t, theta).unwrap(), &probe).unwrap();
        let numeric = qfi_numeric(output_family(probe, t, 0.0), theta, QfiOptions::default()).unwrap();
        prop_assert!(closed >= 0.0);
        prop_assert!((closed - numeric).abs() <= 1e-4 * closed.max(1e-12), "{closed} vs {numeric}");
    }

    #[test]
    fn overlap_stays_in_unit_interval(fam in family(), shift in -6000.0f64..6000.0, smooth in 0.001f64..0.2) {
        let d = redshift_delta(&GeoConfig::earth_geostationary());
        let s = ProfileSpec { delta_smooth: smooth, ..ProfileSpec::baseline(fam) };
        let s = s.with_eps(s.eps_for_shift(d, shift));
        let theta = overlap(d, &s).unwrap();
        let deficit = overlap_deficit(d, &s).unwrap();
        prop_assert!((0.0..=1.0).contains(&theta));
        prop_assert!((theta + deficit - 1.0).abs() < 1e-8, "{theta} + {deficit}");
    }

    #[test]
    fn overlap_is_even_in_shift(fam in family(), shift in 0.0f64..5000.0) {
        let d = redshift_delta(&GeoConfig::earth_geostationary());
        let s = ProfileSpec::baseline(fam);
        let plus = overlap(d, &s.with_eps(s.eps_for_shift(d, shift))).unwrap();
        let minus = overlap(d, &s.with_eps(s.eps_for_shift(d, -shift))).unwrap();
        prop_assert!((plus - minus).abs() < 1e-9);
    }

    #[test]
    fn mode_splitter_identities(kappa in 0.0f64..=1.0, theta_bs in 0.0f64..std::f64::consts::PI) {
        let input = make_input(kappa).unwrap();
        let (tr, re) = apply_mode_bs(&input, theta_bs).unwrap();
        let one = Complex64::new(1.0, 0.0);
        prop_assert!((commutator(&tr, &tr) - one).norm() < 1e-12);
        prop_assert!((commutator(&re, &re) - one).norm() < 1e-12);
        prop_assert!(commutator(&tr, &re).norm() < 1e-12);
        prop_assert!(commutator(&input, &vacuum_partner(kappa).unwrap()).norm() < 1e-12);
        let (_, extracted) = apply_mode_bs(&input, std::f64::consts::FRAC_PI_2).unwrap();
        prop_assert!((commutator(&input, &extracted) - Complex64::new(kappa.sqrt(), 0.0)).norm() < 1e-12);
        prop_assert!(extracted.distance(&ModeVector::a()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bound_is_positive_and_scales_with_measurements(
        fam in family(),
        shift in 10.0f64..900.0,
        n_bar in 0.5f64..100.0,
        y in 0.0f64..=1.0,
        t in 0.1f64..=1.0,
        n in 1u64..10_000,
    ) {
        let probe = GaussianProbe::from_photons(n_bar, y).unwrap();
        let q = BoundQuery { channel_t: t, n_meas: n, ..BoundQuery::baseline(fam, probe) }.with_shift(shift);
        let b1 = rel_error_bound(&q).unwrap();
        let b4 = rel_error_bound(&BoundQuery { n_meas: 4 * n, ..q }).unwrap();
        prop_assert!(b1 > 0.0 && b1.is_finite());
        prop_assert!((b1 / b4 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn optimized_detector_beats_endpoints(fam in family(), n_bar in 0.5f64..1000.0, y in 0.0f64..=1.0, t in 0.1f64..=1.0) {
        let probe = GaussianProbe::from_photons(n_bar, y).unwrap();
        let q = BoundQuery { channel_t: t, ..BoundQuery::baseline(fam, probe) };
        let best = optimize_operating_point(&q).unwrap().bound;
        for eps in [0.0, q.delta()] {
            if let Ok(b) = rel_error_bound(&q.with_eps(eps)) {
                prop_assert!(best <= b * (1.0 + 1e-12), "{best} vs eps={eps}: {b}");
            }
        }
    }
}
