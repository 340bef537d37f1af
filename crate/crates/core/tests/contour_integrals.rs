use proptest::prelude::*;
use tempstable::contour::*;
use tempstable::specfun;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_inversion(z in 0.05f64..20.0) {
        let f = MellinIntegrand::exponential(z).unwrap();
        let v = mellin_barnes_eval(&f, &ContourSpec::auto(&f).unwrap()).unwrap();
        prop_assert!((v - (-z).exp()).abs() <= 1e-12 * (-z).exp().max(1e-3), "{v}");
    }

    #[test]
    fn abscissa_does_not_matter(z in 0.2f64..5.0, gamma in 0.2f64..3.0) {
        let f = MellinIntegrand::exponential(z).unwrap();
        let a = mellin_barnes_eval(&f, &ContourSpec::new(gamma)).unwrap();
        let b = mellin_barnes_eval(&f, &ContourSpec::auto(&f).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-11);
    }

    #[test]
    fn incomplete_gamma_inversion(rho in 0.2f64..3.0, x in 0.1f64..15.0) {
        let f = MellinIntegrand::incomplete_gamma(rho, x).unwrap();
        let v = mellin_barnes_eval(&f, &ContourSpec::auto(&f).unwrap()).unwrap();
        let expected = specfun::gamma_upper(rho, x).unwrap();
        prop_assert!((v - expected).abs() <= 1e-11 * expected.max(1e-3), "{v} vs {expected}");
    }

    #[test]
    fn residues_match_contour(alpha in 0.2f64..0.9, rho in 0.2f64..1.5, z in 0.05f64..1.0) {
        let f = MellinIntegrand::stable_kernel(alpha, rho, z).unwrap();
        let r = residue_series_eval(&f, 400).unwrap();
        let c = mellin_barnes_eval(&f, &ContourSpec::auto(&f).unwrap()).unwrap();
        prop_assert!((r - c).abs() <= 1e-9 * c.abs().max(1.0), "{r} vs {c}");
    }
}

#[test]
fn rejects_algebraic_decay() {
    // alpha = 1 cancels the exponential decay of Gamma(s + rho).
    let f = MellinIntegrand::stable_kernel(1.0, 0.5, 2.0).unwrap();
    assert!(matches!(mellin_barnes_eval(&f, &ContourSpec::new(0.0)), Err(ContourError::DecayError(_))));
}

#[test]
fn rejects_abscissa_outside_strip() {
    let f = MellinIntegrand::incomplete_gamma(0.5, 1.0).unwrap();
    assert!(mellin_barnes_eval(&f, &ContourSpec::new(-0.2)).is_err());
}
