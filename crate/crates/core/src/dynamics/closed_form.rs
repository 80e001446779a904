use num_complex::Complex64;

use super::PropagatorCoefficients;
use crate::error::{Error, Result};
use crate::model::{check_ratio, CouplingConfig};

/// Analytic solution of the coefficient equations for `0 ≤ k < 1`.
pub fn closed_form_propagator(cfg: &CouplingConfig, t: f64) -> Result<PropagatorCoefficients> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::param(format!("time must be finite and >= 0, got {t}")));
    }
    let k = cfg.ratio();
    let phase = cfg.omega() * t;
    let (sin, cos) = phase.sin_cos();
    let one_minus_k2 = 1.0 - k * k;
    let root = one_minus_k2.sqrt();

    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);

    let f2 = im(-sin / root);
    Ok(PropagatorCoefficients {
        time: t,
        f: [re(cos), f2, f2 * k],
        g: [re((1.0 - k * k * cos) / one_minus_k2), re(k * (1.0 - cos) / one_minus_k2), im(-k * sin / root)],
        h: [re((cos - k * k) / one_minus_k2), re(k * (cos - 1.0) / one_minus_k2), im(-sin / root)],
    })
}

/// Exact coefficient values at an odd dark time `t_n = nπ/Ω`, where
/// `cos Ωt_n = −1` and every mechanical admixture vanishes.
pub fn dark_coefficients(ratio: f64, time: f64) -> Result<PropagatorCoefficients> {
    check_ratio(ratio)?;
    let k = ratio;
    let one_minus_k2 = 1.0 - k * k;
    let diag = (1.0 + k * k) / one_minus_k2;
    let off = 2.0 * k / one_minus_k2;
    let re = |x: f64| Complex64::new(x, 0.0);
    let zero = re(0.0);
    Ok(PropagatorCoefficients {
        time,
        f: [re(-1.0), zero, zero],
        g: [re(diag), re(off), zero],
        h: [re(-diag), re(-off), zero],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_at_time_zero() {
        for k in [0.0, 0.3, 0.9] {
            let c = closed_form_propagator(&CouplingConfig::unit(k).unwrap(), 0.0).unwrap();
            assert_eq!(c.max_abs_diff(&PropagatorCoefficients::identity()), 0.0);
        }
    }

    #[test]
    fn half_period_reverses_mechanics() {
        let cfg = CouplingConfig::unit(0.6).unwrap();
        let c = closed_form_propagator(&cfg, PI / 0.8).unwrap();
        assert!((c.f[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!(c.f[1].norm() < 1e-14);
        assert!(c.f[2].norm() < 1e-14);
    }

    #[test]
    fn optical_row_at_first_dark_time() {
        let cfg = CouplingConfig::unit(0.5).unwrap();
        let c = closed_form_propagator(&cfg, PI / cfg.omega()).unwrap();
        assert!((c.g[0].re - 5.0 / 3.0).abs() < 1e-14);
        assert!((c.g[1].re - 4.0 / 3.0).abs() < 1e-14);
        assert!(c.g[2].norm() < 1e-14);
    }

    #[test]
    fn negative_time_is_rejected() {
        let cfg = CouplingConfig::unit(0.5).unwrap();
        assert!(closed_form_propagator(&cfg, -1.0).is_err());
        assert!(closed_form_propagator(&cfg, f64::NAN).is_err());
    }

    #[test]
    fn dark_coefficients_reject_bad_ratio() {
        assert!(dark_coefficients(1.0, 0.0).is_err());
        assert!(dark_coefficients(-0.1, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn commutators_hold_anywhere(k in 0.0..0.9f64, phase in 0.0..1.0f64) {
            let cfg = CouplingConfig::unit(k).unwrap();
            let c = closed_form_propagator(&cfg, phase * 2.0 * cfg.period()).unwrap();
            proptest::prop_assert!(c.commutator_residuals().max_abs() < 1e-12);
        }

        #[test]
        fn periodic_in_two_pi_over_omega(k in 0.0..0.9f64, t in 0.0..20.0f64) {
            let cfg = CouplingConfig::unit(k).unwrap();
            let a = closed_form_propagator(&cfg, t).unwrap();
            let b = closed_form_propagator(&cfg, t + cfg.period()).unwrap();
            proptest::prop_assert!(a.max_abs_diff(&b) < 1e-9);
        }

        #[test]
        fn odd_dark_instants_share_values(k in 0.0..0.9f64, m in 0u32..6) {
            let cfg = CouplingConfig::unit(k).unwrap();
            let n = f64::from(2 * m + 1);
            let c = closed_form_propagator(&cfg, n * PI / cfg.omega()).unwrap();
            let expected = dark_coefficients(k, c.time).unwrap();
            proptest::prop_assert!(c.max_abs_diff(&expected) < 1e-10);
        }
    }
}
