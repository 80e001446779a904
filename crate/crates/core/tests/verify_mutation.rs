//! The verification suite must notice a propagator with a wrong sign.

use num_complex::Complex64;

use eomconv::cli::verify::{run_verify_with, ClosedForm, CoefficientSource, VerifyLevel, VerifyOptions};
use eomconv::dynamics::PropagatorCoefficients;
use eomconv::model::CouplingConfig;
use eomconv::Result;

/// `h2 = k(cos Ωt + 1)/(1 − k²)`: the constant term enters with the wrong sign.
struct FlippedConstantInH2;

impl CoefficientSource for FlippedConstantInH2 {
    fn coefficients(&self, config: &CouplingConfig, time: f64) -> Result<PropagatorCoefficients> {
        let mut c = ClosedForm.coefficients(config, time)?;
        let k = config.ratio();
        let cos = (config.omega() * time).cos();
        c.h[1] = Complex64::new(k * (cos + 1.0) / (1.0 - k * k), 0.0);
        Ok(c)
    }
}

/// `h2 → −h2`.
struct NegatedH2;

impl CoefficientSource for NegatedH2 {
    fn coefficients(&self, config: &CouplingConfig, time: f64) -> Result<PropagatorCoefficients> {
        let mut c = ClosedForm.coefficients(config, time)?;
        c.h[1] = -c.h[1];
        Ok(c)
    }
}

fn full() -> VerifyOptions {
    VerifyOptions { level: VerifyLevel::Full, ..VerifyOptions::default() }
}

#[test]
fn pristine_source_passes_full_suite() {
    let report = run_verify_with(&full(), &ClosedForm);
    assert!(report.passed, "{:?}", report.failed());
}

#[test]
fn flipped_constant_trips_norm_identity_and_conditional_rate() {
    let report = run_verify_with(&full(), &FlippedConstantInH2);
    assert!(!report.passed);
    let failed = report.failed();
    for name in ["dark_norm_identity", "cqc_general_rate", "dark_mode_values", "ode_vs_closed_form"] {
        assert!(failed.contains(&name), "{name} not in {failed:?}");
    }
    // Checks that never look at the propagator are unaffected.
    for name in ["eaqc_closed_forms", "concurrence_generic", "critical_coupling", "fock_field_means"] {
        assert!(!failed.contains(&name), "{name} in {failed:?}");
    }
}

#[test]
fn negated_h2_is_caught_by_phase_sensitive_checks() {
    // |h2|² is blind to the sign, so the norm identity and the conditional
    // rate still pass; the sign shows up wherever h2 interferes with h1.
    let report = run_verify_with(&full(), &NegatedH2);
    let failed = report.failed();
    for name in ["dark_mode_values", "ode_vs_closed_form", "commutators_closed_form", "eaqc_general_rate"] {
        assert!(failed.contains(&name), "{name} not in {failed:?}");
    }
    for name in ["dark_norm_identity", "cqc_general_rate", "cqc_reversibility"] {
        assert!(!failed.contains(&name), "{name} in {failed:?}");
    }
}
