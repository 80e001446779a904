//! Conversion rates at dynamically-dark instants.
//!
//! A rate is the squared magnitude of the ratio between the output channel's
//! mean amplitude at `t_n` and the input channel's initial mean amplitude. It
//! is a ratio of amplitudes, not of photon fluxes, and it exceeds 1 once the
//! two-mode-squeezing gain dominates.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{dark_coefficients, is_dynamically_dark, PropagatorCoefficients};
use crate::error::{Error, Result};
use crate::model::{check_ratio, CouplingConfig};
use crate::states::FieldMeans;

/// Mean-amplitude brackets below this magnitude are treated as a vanishing
/// input channel.
pub const VANISHING_MEAN: f64 = 1e-12;

/// Half-width of the neutral band around `R = 1`.
pub const NEUTRAL_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "optical_to_microwave")]
    OpticalToMicrowave,
    #[serde(rename = "microwave_to_optical")]
    MicrowaveToOptical,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::OpticalToMicrowave => Direction::MicrowaveToOptical,
            Direction::MicrowaveToOptical => Direction::OpticalToMicrowave,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OpticalToMicrowave => "ow",
            Direction::MicrowaveToOptical => "wo",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    CoefficientBased,
    FockOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConversionReport {
    pub direction: Direction,
    pub rate: f64,
    pub dark_index: u32,
    pub coupling_ratio: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Enhancing,
    Suppressing,
    Neutral,
}

impl Regime {
    pub fn classify(factor: f64) -> Self {
        if factor < 1.0 - NEUTRAL_BAND {
            Regime::Enhancing
        } else if factor > 1.0 + NEUTRAL_BAND {
            Regime::Suppressing
        } else {
            Regime::Neutral
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Enhancing => "enhancing",
            Regime::Suppressing => "suppressing",
            Regime::Neutral => "neutral",
        })
    }
}

/// Entanglement-affecting factor: unentangled rate over maximally-entangled rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EafReport {
    pub phase: f64,
    pub coupling_ratio: f64,
    pub factor: f64,
    pub regime: Regime,
}

/// Rate from propagated coefficients at a dark instant and arbitrary initial
/// means. Coefficients must be dark to within `dark_tol` and sit at an odd
/// dark index.
pub fn general_rate(
    cfg: &CouplingConfig,
    coeffs: &PropagatorCoefficients,
    means: &FieldMeans,
    direction: Direction,
    dark_tol: f64,
) -> Result<ConversionReport> {
    if !is_dynamically_dark(coeffs, dark_tol) {
        return Err(Error::Precondition(format!(
            "coefficients at t = {} are not dynamically dark (tol {dark_tol:e})",
            coeffs.time
        )));
    }
    let index = (coeffs.time * cfg.omega() / PI).round();
    if index < 1.0 || index % 2.0 == 0.0 {
        return Err(Error::Precondition(format!(
            "t = {} is not an odd dark instant (n = {index})",
            coeffs.time
        )));
    }
    let rate = rate_from_rows(coeffs, means, direction)?;
    Ok(ConversionReport {
        direction,
        rate,
        dark_index: index as u32,
        coupling_ratio: cfg.ratio(),
        method: Method::CoefficientBased,
    })
}

/// `|diag · other/input + off · input*/input|²` with the row of the output channel.
fn rate_from_rows(coeffs: &PropagatorCoefficients, means: &FieldMeans, direction: Direction) -> Result<f64> {
    let (input, other, diag, off) = match direction {
        Direction::OpticalToMicrowave => (means.optical, means.microwave, coeffs.h[0], coeffs.h[1]),
        Direction::MicrowaveToOptical => (means.microwave, means.optical, coeffs.g[0], coeffs.g[1]),
    };
    if input.norm() == 0.0 {
        return Err(Error::UndefinedRate);
    }
    Ok((diag * (other / input) + off * (input.conj() / input)).norm_sqr())
}

/// Conditional conversion rate `4k² / (1 − k²)²`, the same in both directions.
pub fn cqc_rate(ratio: f64) -> Result<f64> {
    check_ratio(ratio)?;
    let k = ratio;
    Ok(4.0 * k * k / ((1.0 - k * k) * (1.0 - k * k)))
}

/// Entanglement-assisted rate for the symmetric state `α = β = |α| e^{iφ}`.
pub fn eaqc_rate(ratio: f64, theta: f64, phase: f64, amplitude: f64, direction: Direction) -> Result<f64> {
    check_ratio(ratio)?;
    if !amplitude.is_finite() || amplitude <= 0.0 {
        return Err(Error::UndefinedRate);
    }
    let overlap = (-amplitude * amplitude).exp();
    let cross = (2.0 * theta).sin() * overlap;
    if 1.0 + cross <= 0.0 {
        return Err(Error::DegenerateState { inverse_norm_sq: 1.0 + cross });
    }
    let (sin, cos) = theta.sin_cos();
    let microwave_weight = 2.0 * sin * sin + cross;
    let optical_weight = 2.0 * cos * cos + cross;

    let coeffs = dark_coefficients(ratio, 0.0)?;
    let conj_phase = Complex64::from_polar(1.0, -2.0 * phase);
    let (input, other, diag, off) = match direction {
        Direction::OpticalToMicrowave => (optical_weight, microwave_weight, coeffs.h[0], coeffs.h[1]),
        Direction::MicrowaveToOptical => (microwave_weight, optical_weight, coeffs.g[0], coeffs.g[1]),
    };
    if input.abs() < VANISHING_MEAN {
        return Err(Error::UndefinedRate);
    }
    Ok((diag * (other / input) + off * conj_phase).norm_sqr())
}

/// `|1 + k² + 2k e^{−2iφ}|² / (1 − k²)²`, the maximally-entangled (`θ = π/4`) rate.
pub fn eaqc_max_entangled(ratio: f64, phase: f64) -> Result<f64> {
    check_ratio(ratio)?;
    let k = ratio;
    let num = Complex64::new(1.0 + k * k, 0.0) + Complex64::from_polar(2.0 * k, -2.0 * phase);
    Ok(num.norm_sqr() / ((1.0 - k * k) * (1.0 - k * k)))
}

pub fn eaf(ratio: f64, phase: f64) -> Result<EafReport> {
    check_ratio(ratio)?;
    if ratio == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    let factor = cqc_rate(ratio)? / eaqc_max_entangled(ratio, phase)?;
    Ok(EafReport { phase, coupling_ratio: ratio, factor, regime: Regime::classify(factor) })
}

/// Coupling ratio at which `R(π/2) = 1`, by bisection on `[0.1, 0.5]`.
pub fn critical_coupling() -> f64 {
    let excess = |k: f64| eaf(k, FRAC_PI_2).map(|r| r.factor - 1.0).expect("bracket lies inside (0, 1)");
    let (mut lo, mut hi) = (0.1, 0.5);
    debug_assert!(excess(lo) < 0.0 && excess(hi) > 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form rate report for conditional conversion.
pub fn cqc_report(ratio: f64, direction: Direction) -> Result<ConversionReport> {
    Ok(ConversionReport {
        direction,
        rate: cqc_rate(ratio)?,
        dark_index: 1,
        coupling_ratio: ratio,
        method: Method::ClosedForm,
    })
}

/// Closed-form rate report for entanglement-assisted conversion.
pub fn eaqc_report(ratio: f64, theta: f64, phase: f64, amplitude: f64, direction: Direction) -> Result<ConversionReport> {
    Ok(ConversionReport {
        direction,
        rate: eaqc_rate(ratio, theta, phase, amplitude, direction)?,
        dark_index: 1,
        coupling_ratio: ratio,
        method: Method::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{dark_mode_times, DEFAULT_DECOUPLING_TOL};
    use crate::states::EntangledCoherentState;
    use std::f64::consts::FRAC_PI_4;

    const OW: Direction = Direction::OpticalToMicrowave;
    const WO: Direction = Direction::MicrowaveToOptical;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn first_dark(k: f64) -> (CouplingConfig, PropagatorCoefficients) {
        let cfg = CouplingConfig::unit(k).unwrap();
        let rec = dark_mode_times(&cfg, 1).unwrap()[0];
        (cfg, rec.coefficients)
    }

    #[test]
    fn general_rate_examples() {
        let (cfg, co) = first_dark(0.5);
        let means = FieldMeans::new(c(1.0, 0.0), c(0.0, 0.0));
        let r = general_rate(&cfg, &co, &means, OW, DEFAULT_DECOUPLING_TOL).unwrap();
        assert!((r.rate - 16.0 / 9.0).abs() < 1e-12);
        assert_eq!(r.dark_index, 1);
        assert_eq!(r.method, Method::CoefficientBased);

        let (cfg0, co0) = first_dark(0.0);
        assert!(general_rate(&cfg0, &co0, &means, OW, DEFAULT_DECOUPLING_TOL).unwrap().rate < 1e-30);

        let ecs = EntangledCoherentState::symmetric(FRAC_PI_4, 1.0, 0.0).field_means().unwrap();
        let r = general_rate(&cfg, &co, &ecs, OW, DEFAULT_DECOUPLING_TOL).unwrap();
        assert!((r.rate - 9.0).abs() < 1e-12);
    }

    #[test]
    fn general_rate_errors() {
        let (cfg, co) = first_dark(0.5);
        let no_input = FieldMeans::new(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(general_rate(&cfg, &co, &no_input, OW, DEFAULT_DECOUPLING_TOL), Err(Error::UndefinedRate));

        let bright = crate::dynamics::closed_form_propagator(&cfg, 1.0).unwrap();
        let means = FieldMeans::new(c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(general_rate(&cfg, &bright, &means, OW, DEFAULT_DECOUPLING_TOL), Err(Error::Precondition(_))));

        // Identity propagator at t = 0 is dark but converts nothing.
        assert!(matches!(
            general_rate(&cfg, &PropagatorCoefficients::identity(), &means, OW, DEFAULT_DECOUPLING_TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cqc_examples() {
        assert_eq!(cqc_rate(0.0).unwrap(), 0.0);
        assert!((cqc_rate(0.5).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        assert!((cqc_rate(2f64.sqrt() - 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(cqc_rate(1.0).is_err());
        assert!(cqc_rate(-0.2).is_err());
    }

    #[test]
    fn eaqc_examples() {
        for phi in [0.0, 0.7, FRAC_PI_2] {
            assert!((eaqc_rate(0.5, 0.0, phi, 1.0, OW).unwrap() - 16.0 / 9.0).abs() < 1e-12);
        }
        assert!((eaqc_rate(0.5, FRAC_PI_4, 0.0, 1.0, OW).unwrap() - 9.0).abs() < 1e-12);
        assert!((eaqc_rate(0.5, FRAC_PI_4, FRAC_PI_2, 1.0, OW).unwrap() - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn eaqc_vanishing_input() {
        // θ = π/2 leaves the optical channel empty.
        assert_eq!(eaqc_rate(0.5, FRAC_PI_2, 0.0, 1.0, OW), Err(Error::UndefinedRate));
        assert_eq!(eaqc_rate(0.5, 0.0, 0.0, 1.0, WO), Err(Error::UndefinedRate));
        assert_eq!(eaqc_rate(0.5, FRAC_PI_4, 0.0, 0.0, OW), Err(Error::UndefinedRate));
        assert!((eaqc_rate(0.5, FRAC_PI_2, 0.3, 1.0, WO).unwrap() - 16.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn max_entangled_examples() {
        assert!((eaqc_max_entangled(0.5, 0.0).unwrap() - 9.0).abs() < 1e-12);
        assert!((eaqc_max_entangled(0.5, FRAC_PI_2).unwrap() - 1.0 / 9.0).abs() < 1e-12);
        for phi in [0.0, 1.0, 2.0] {
            assert!((eaqc_max_entangled(0.0, phi).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eaf_examples() {
        let r = eaf(0.5, 0.0).unwrap();
        assert!((r.factor - 16.0 / 81.0).abs() < 1e-12);
        assert_eq!(r.regime, Regime::Enhancing);

        let r = eaf(2.0 - 3f64.sqrt(), FRAC_PI_2).unwrap();
        assert!((r.factor - 1.0).abs() < 1e-12);
        assert_eq!(r.regime, Regime::Neutral);

        let r = eaf(0.5, FRAC_PI_2).unwrap();
        assert!((r.factor - 16.0).abs() < 1e-12);
        assert_eq!(r.regime, Regime::Suppressing);

        assert_eq!(eaf(0.0, 0.0), Err(Error::DegenerateRatio));
    }

    #[test]
    fn critical_coupling_examples() {
        let kc = critical_coupling();
        assert!((kc - 0.267_949_192_431_122_7).abs() < 1e-9);
        assert!((eaf(kc, FRAC_PI_2).unwrap().factor - 1.0).abs() < 1e-9);
        assert!((kc * kc - 4.0 * kc + 1.0).abs() < 1e-9);
    }

    #[test]
    fn coefficient_based_matches_closed_form() {
        for k in [0.1, 0.4, 0.8] {
            let (cfg, co) = first_dark(k);
            for (theta, phi, a) in [(FRAC_PI_4, 0.3, 0.7), (0.2, 1.1, 1.5), (1.0, -0.4, 0.2)] {
                let means = EntangledCoherentState::symmetric(theta, a, phi).field_means().unwrap();
                for dir in [OW, WO] {
                    let coef = general_rate(&cfg, &co, &means, dir, DEFAULT_DECOUPLING_TOL).unwrap().rate;
                    let closed = eaqc_report(k, theta, phi, a, dir).unwrap().rate;
                    assert!((coef - closed).abs() <= 1e-10 * closed.max(1.0), "k={k} θ={theta} {dir}");
                }
            }
        }
    }

    #[test]
    fn regime_band() {
        assert_eq!(Regime::classify(1.0), Regime::Neutral);
        assert_eq!(Regime::classify(1.0 + 1e-13), Regime::Neutral);
        assert_eq!(Regime::classify(1.0 - 1e-11), Regime::Enhancing);
        assert_eq!(Regime::classify(1.0 + 1e-11), Regime::Suppressing);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn maximal_entanglement_is_reversible(k in 0.0f64..0.95, phi in -6.3f64..6.3, a in 0.05f64..3.0) {
                let ow = eaqc_rate(k, FRAC_PI_4, phi, a, OW).unwrap();
                let wo = eaqc_rate(k, FRAC_PI_4, phi, a, WO).unwrap();
                prop_assert!((ow - wo).abs() <= 1e-12 * ow.max(1.0));
            }

            #[test]
            fn maximal_entanglement_matches_closed_form(k in 0.0f64..0.95, phi in -6.3f64..6.3) {
                let expect = eaqc_max_entangled(k, phi).unwrap();
                for a in [0.1, 1.0, 3.0] {
                    let got = eaqc_rate(k, FRAC_PI_4, phi, a, OW).unwrap();
                    prop_assert!((got - expect).abs() <= 1e-12 * expect.max(1.0));
                }
            }

            #[test]
            fn unentangled_limits_recover_cqc(k in 0.0f64..0.95, phi in -6.3f64..6.3, a in 0.05f64..3.0) {
                let cqc = cqc_rate(k).unwrap();
                let ow = eaqc_rate(k, 0.0, phi, a, OW).unwrap();
                let wo = eaqc_rate(k, FRAC_PI_2, phi, a, WO).unwrap();
                prop_assert!((ow - cqc).abs() <= 1e-12 * cqc.max(1.0));
                prop_assert!((wo - cqc).abs() <= 1e-12 * cqc.max(1.0));
            }

            #[test]
            fn max_entangled_is_pi_periodic(k in 0.0f64..0.95, phi in -6.3f64..6.3) {
                let a = eaqc_max_entangled(k, phi).unwrap();
                let b = eaqc_max_entangled(k, phi + PI).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            }
        }
    }
}
