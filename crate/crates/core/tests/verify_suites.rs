use tempstable::verify::{self, Verdict, VerifyConfig};

#[test]
fn full_suite_is_green_and_deterministic() {
    let cfg = VerifyConfig::default();
    let a = verify::run_suite("all", &cfg).unwrap();
    let b = verify::run_suite("all", &cfg).unwrap();
    let failures: Vec<_> = a.iter().filter(|r| r.is_failure()).map(|r| (&r.check_id, &r.notes)).collect();
    assert!(failures.is_empty(), "{failures:#?}");
    assert_eq!(verify::to_json(&a).unwrap(), verify::to_json(&b).unwrap());
    assert!(a.windows(2).all(|w| w[0].check_id <= w[1].check_id));
}

#[test]
fn every_suite_is_nonempty() {
    let cfg = VerifyConfig { seed: 5, draws: 20_000 };
    for name in ["relaxation", "spectral", "moments", "tails", "codifference", "cm", "levy-measure"] {
        assert!(!verify::run_suite(name, &cfg).unwrap().is_empty(), "{name}");
    }
}

#[test]
fn spectral_suite_records_the_literal_constant() {
    let r = verify::run_suite("spectral", &VerifyConfig::default()).unwrap();
    assert!(r.iter().any(|r| r.check_id == "spectral.literal_constant" && r.verdict == Verdict::DocumentedDiscrepancy));
}

#[test]
fn relaxation_residuals_meet_the_bound() {
    let r = verify::run_suite("relaxation", &VerifyConfig::default()).unwrap();
    let ode: Vec<_> = r.iter().filter(|r| r.check_id == "relaxation.ode_residual").collect();
    assert_eq!(ode.len(), 6);
    assert!(ode.iter().all(|r| r.passed() && r.tolerance == 1e-5));
}
