//! Identity, residual and statistical checks assembled into reports.

mod checks;
mod report;
pub mod tolerances;

use std::fmt::Write as _;

use thiserror::Error;

pub use report::{inputs, Verdict, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of {SUITES:?} or \"all\"")]
    UnknownSuite(String),
    #[error("report serialization failed: {0}")]
    Serialize(String),
}

/// Knobs shared by the Monte-Carlo checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub draws: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 20_240_601, draws: 200_000 }
    }
}

pub const SUITES: [&str; 10] =
    ["relaxation", "spectral", "density", "moments", "tails", "codifference", "sampling", "cm", "rho2", "levy-measure"];

/// A registered check: the operations it exercises and how to run it.
pub struct CheckSpec {
    pub id: &'static str,
    pub suite: &'static str,
    pub covers: &'static [&'static str],
    pub run: fn(&VerifyConfig) -> Vec<VerificationReport>,
}

macro_rules! check {
    ($id:literal, $suite:literal, [$($op:literal),* $(,)?], $run:path) => {
        CheckSpec { id: $id, suite: $suite, covers: &[$($op),*], run: $run }
    };
}

use checks as c;

pub static REGISTRY: &[CheckSpec] = &[
    check!("relaxation.ode_residual", "relaxation", ["phi", "tempered_derivative", "conv_derivative"], c::ode_residual),
    check!("relaxation.ml_form", "relaxation", ["phi", "phi_ml_form"], c::ml_form),
    check!("relaxation.caputo_monomials", "relaxation", ["conv_derivative"], c::caputo_monomials),
    check!("relaxation.caputo_mittag_leffler", "relaxation", ["conv_derivative"], c::caputo_ml),
    check!("relaxation.laplace_of_derivative", "relaxation", ["laplace_of_conv_derivative"], c::laplace_of_derivative),
    check!("relaxation.laplace_of_phi", "relaxation", ["phi"], c::laplace_of_phi),
    check!("relaxation.small_t", "relaxation", ["phi"], c::small_t),
    check!("relaxation.complete_monotonicity", "relaxation", ["complete_monotonicity_check"], c::relaxation_cm),
    check!("spectral.reconstruct", "spectral", ["spectral_reconstruct", "phi"], c::spectral_reconstruct),
    check!("spectral.mass", "spectral", ["spectral_density"], c::spectral_mass),
    check!("spectral.literal_constant", "spectral", ["spectral_density"], c::spectral_literal),
    check!("density.normalization", "density", ["density"], c::density_mass),
    check!("density.laplace_closure", "density", ["density", "laplace_1d"], c::density_laplace),
    check!("density.method_agreement", "density", ["density"], c::method_agreement),
    check!("density.stable_reduction", "density", ["density"], c::stable_reduction),
    check!("density.self_similarity", "density", ["density"], c::self_similarity),
    check!("moments.formula_vs_quadrature", "moments", ["moment", "density"], c::moments_quadrature),
    check!("moments.integer_anchor", "moments", ["moment"], c::moment_anchor),
    check!("tails.constant", "tails", ["cdf_tail"], c::tail_constant),
    check!("tails.closed_form", "tails", ["cdf_tail"], c::tail_closed_form),
    check!("codifference.stable_closed_form", "codifference", ["codifference", "laplace_nd"], c::codiff_stable),
    check!("codifference.large_t", "codifference", ["codifference"], c::codiff_limit),
    check!("codifference.literal_forms", "codifference", ["codifference"], c::codiff_literal),
    check!("sampling.marginal_laplace", "sampling", ["sample_one", "laplace_1d"], c::sampler_marginal),
    check!("sampling.path_joint_laplace", "sampling", ["sample_path", "laplace_nd"], c::sampler_paths),
    check!("sampling.rho2", "sampling", ["sample_rho2"], c::sampler_rho2),
    check!("sampling.misc", "sampling", ["sample_one", "moment"], c::sampler_misc),
    check!("cm.joint_2d", "cm", ["cm_check_2d", "laplace_nd"], c::cm_joint),
    check!("cm.probes", "cm", ["laplace_1d"], c::cm_boundary),
    check!("rho2.wright_vs_contour", "rho2", ["density_rho2_wright", "density"], c::rho2_wright),
    check!("rho2.closed_form", "rho2", ["density_rho2_wright", "density"], c::rho2_closed_form),
    check!("rho2.riemann_liouville", "rho2", ["density_rho2_rl"], c::rho2_rl),
    check!("rho2.fourier_residual", "rho2", ["rho2_fourier_check"], c::rho2_fourier),
    check!("rho2.poisson_identity", "rho2", ["laplace_1d"], c::poisson_identity),
    check!("levy_measure.example", "levy-measure", ["levy_measure_mz"], c::levy_example),
    check!("levy_measure.integrability", "levy-measure", ["mz_integrability"], c::levy_integrability),
    check!("levy_measure.small_w_slope", "levy-measure", ["levy_measure_mz"], c::levy_slope),
];

/// Registered check groups; guarded by a test so that additions are deliberate.
pub const CHECK_COUNT: usize = 37;

/// Runs the named suite (or `"all"`). Groups run in parallel; the reports
/// come back sorted by `check_id`, ties kept in registration order.
pub fn run_suite(name: &str, config: &VerifyConfig) -> Result<Vec<VerificationReport>, VerifyError> {
    if name != "all" && !SUITES.contains(&name) {
        return Err(VerifyError::UnknownSuite(name.to_string()));
    }
    let selected: Vec<&CheckSpec> = REGISTRY.iter().filter(|c| name == "all" || c.suite == name).collect();
    let mut reports: Vec<VerificationReport> =
        crate::par::map(&selected, |c| (c.run)(config)).into_iter().flatten().collect();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(reports)
}

/// Number of reports with a `Fail` verdict.
pub fn failure_count(reports: &[VerificationReport]) -> usize {
    reports.iter().filter(|r| r.is_failure()).count()
}

pub fn to_json(reports: &[VerificationReport]) -> Result<String, VerifyError> {
    serde_json::to_string_pretty(reports).map_err(|e| VerifyError::Serialize(e.to_string()))
}

/// Plain-text table: one row per report.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<40} {:<22} {:>12} {:>10}", "check", "verdict", "max_dev", "tol");
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::DocumentedDiscrepancy => "documented-discrepancy",
        };
        let _ = writeln!(s, "{:<40} {:<22} {:>12.3e} {:>10.1e}", r.check_id, verdict, r.max_deviation(), r.tolerance);
    }
    let _ = writeln!(
        s,
        "{} reports, {} failed, {} documented discrepancies",
        reports.len(),
        failure_count(reports),
        reports.iter().filter(|r| r.verdict == Verdict::DocumentedDiscrepancy).count()
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    const OPERATIONS: [&str; 23] = [
        "phi",
        "phi_ml_form",
        "conv_derivative",
        "tempered_derivative",
        "laplace_of_conv_derivative",
        "spectral_density",
        "spectral_reconstruct",
        "complete_monotonicity_check",
        "laplace_1d",
        "laplace_nd",
        "density",
        "density_rho2_wright",
        "density_rho2_rl",
        "cdf_tail",
        "moment",
        "codifference",
        "cm_check_2d",
        "levy_measure_mz",
        "mz_integrability",
        "rho2_fourier_check",
        "sample_one",
        "sample_rho2",
        "sample_path",
    ];

    #[test]
    fn registry_size_is_pinned() {
        assert_eq!(REGISTRY.len(), CHECK_COUNT);
    }

    #[test]
    fn every_operation_has_a_check() {
        let covered: BTreeSet<&str> = REGISTRY.iter().flat_map(|c| c.covers.iter().copied()).collect();
        for op in OPERATIONS {
            assert!(covered.contains(op), "{op} has no registered check");
        }
        for c in REGISTRY {
            assert!(SUITES.contains(&c.suite), "{} in unknown suite {}", c.id, c.suite);
        }
    }

    #[test]
    fn registry_ids_are_unique() {
        let ids: BTreeSet<&str> = REGISTRY.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), REGISTRY.len());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", &VerifyConfig::default()), Err(VerifyError::UnknownSuite(_))));
    }

    #[test]
    fn summary_counts() {
        let r = vec![
            VerificationReport::compare("a", inputs([]), vec![1.0], vec![1.0], 0.0, ""),
            VerificationReport::compare("b", inputs([]), vec![1.0], vec![2.0], 0.1, ""),
        ];
        assert_eq!(failure_count(&r), 1);
        assert!(summary_table(&r).contains("2 reports, 1 failed"));
        assert!(to_json(&r).unwrap().contains("\"verdict\": \"fail\""));
    }
}
