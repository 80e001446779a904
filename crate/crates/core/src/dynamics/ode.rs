use num_complex::Complex64;

use super::PropagatorCoefficients;
use crate::error::{Error, Result};
use crate::integrator::{ComplexSystem, Dopri5, StepControl};
use crate::model::CouplingConfig;

/// Integration tolerance for the ODE route, in `(0, 1e-4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    tolerance: f64,
}

impl ToleranceSpec {
    pub const MAX: f64 = 1e-4;

    pub fn new(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance <= Self::MAX) {
            return Err(Error::param(format!("integration tolerance must lie in (0, 1e-4], got {tolerance}")));
        }
        Ok(ToleranceSpec { tolerance })
    }

    pub fn value(&self) -> f64 {
        self.tolerance
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec { tolerance: 1e-10 }
    }
}

/// The nine coupled linear coefficient equations obtained by substituting the
/// operator expansion into the Heisenberg equations of motion. State layout
/// is `f1 f2 f3 g1 g2 g3 h1 h2 h3`.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientSystem {
    optical_coupling: f64,
    microwave_coupling: f64,
}

impl CoefficientSystem {
    pub fn new(cfg: &CouplingConfig) -> Self {
        CoefficientSystem { optical_coupling: cfg.optical_coupling(), microwave_coupling: cfg.microwave_coupling() }
    }
}

impl ComplexSystem for CoefficientSystem {
    fn dimension(&self) -> usize {
        9
    }

    fn rhs(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let mi_go = Complex64::new(0.0, -self.optical_coupling);
        let mi_gw = Complex64::new(0.0, -self.microwave_coupling);
        let (f1, f2, f3) = (y[0], y[1], y[2]);
        let (g1, g2, g3) = (y[3], y[4], y[5]);
        let (h1, h2, h3) = (y[6], y[7], y[8]);

        dy[0] = mi_go * g3.conj() + mi_gw * h3;
        dy[1] = mi_go * g2.conj() + mi_gw * h1;
        dy[2] = mi_go * g1.conj() + mi_gw * h2;
        dy[3] = mi_go * f3.conj();
        dy[4] = mi_go * f2.conj();
        dy[5] = mi_go * f1.conj();
        dy[6] = mi_gw * f2;
        dy[7] = mi_gw * f3;
        dy[8] = mi_gw * f1;
    }
}

/// Coefficients at `t` by numerical integration from the identity.
pub fn ode_propagator(cfg: &CouplingConfig, t: f64, tol: ToleranceSpec) -> Result<PropagatorCoefficients> {
    Ok(ode_trajectory(cfg, &[t], tol)?.remove(0))
}

/// Coefficients along a non-decreasing sequence of output times, integrated
/// in a single pass.
pub fn ode_trajectory(cfg: &CouplingConfig, times: &[f64], tol: ToleranceSpec) -> Result<Vec<PropagatorCoefficients>> {
    if let Some(bad) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::param(format!("time must be finite and >= 0, got {bad}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("output times must be non-decreasing"));
    }
    let system = CoefficientSystem::new(cfg);
    let start = PropagatorCoefficients::identity().to_array();
    let mut stepper = Dopri5::new(&system, StepControl::new(tol.value()), 0.0, &start);
    times
        .iter()
        .map(|&t| {
            stepper.advance_to(t)?;
            Ok(PropagatorCoefficients::from_array(t, stepper.state()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::closed_form_propagator;
    use std::f64::consts::PI;

    #[test]
    fn tolerance_bounds() {
        assert!(ToleranceSpec::new(0.0).is_err());
        assert!(ToleranceSpec::new(1e-3).is_err());
        assert!(ToleranceSpec::new(f64::NAN).is_err());
        assert!(ToleranceSpec::new(1e-4).is_ok());
    }

    #[test]
    fn time_zero_is_identity() {
        let cfg = CouplingConfig::unit(0.3).unwrap();
        let c = ode_propagator(&cfg, 0.0, ToleranceSpec::default()).unwrap();
        assert_eq!(c, PropagatorCoefficients::identity());
    }

    #[test]
    fn agrees_with_closed_form() {
        let cfg = CouplingConfig::unit(0.6).unwrap();
        let ode = ode_propagator(&cfg, 2.0, ToleranceSpec::default()).unwrap();
        let exact = closed_form_propagator(&cfg, 2.0).unwrap();
        assert!(ode.max_abs_diff(&exact) < 1e-9, "diff {}", ode.max_abs_diff(&exact));
    }

    #[test]
    fn long_integration_preserves_commutators() {
        let cfg = CouplingConfig::unit(0.9).unwrap();
        let c = ode_propagator(&cfg, 10.0 * PI / cfg.omega(), ToleranceSpec::default()).unwrap();
        let r = c.commutator_residuals().max_abs();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn unsorted_times_are_rejected() {
        let cfg = CouplingConfig::unit(0.3).unwrap();
        assert!(ode_trajectory(&cfg, &[1.0, 0.5], ToleranceSpec::default()).is_err());
        assert!(ode_trajectory(&cfg, &[-1.0], ToleranceSpec::default()).is_err());
    }
}
