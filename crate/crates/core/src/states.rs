//! Initial two-mode field states: the entangled coherent state
//! `N[cosθ |α⟩_o|0⟩_w + sinθ |0⟩_o|β⟩_w]`, its normalization, concurrence and
//! field means.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entangled coherent state parameters. Serialises as
/// `{theta, alpha_re, alpha_im, beta_re, beta_im}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "StateRecord", into = "StateRecord")]
pub struct EntangledCoherentState {
    pub theta: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    theta: f64,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
}

impl From<StateRecord> for EntangledCoherentState {
    fn from(r: StateRecord) -> Self {
        EntangledCoherentState {
            theta: r.theta,
            alpha: Complex64::new(r.alpha_re, r.alpha_im),
            beta: Complex64::new(r.beta_re, r.beta_im),
        }
    }
}

impl From<EntangledCoherentState> for StateRecord {
    fn from(s: EntangledCoherentState) -> Self {
        StateRecord { theta: s.theta, alpha_re: s.alpha.re, alpha_im: s.alpha.im, beta_re: s.beta.re, beta_im: s.beta.im }
    }
}

/// Initial mean amplitudes `⟨c_o(0)⟩` and `⟨c_w(0)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMeans {
    pub optical: Complex64,
    pub microwave: Complex64,
}

impl FieldMeans {
    pub fn new(optical: Complex64, microwave: Complex64) -> Self {
        FieldMeans { optical, microwave }
    }
}

impl EntangledCoherentState {
    pub fn new(theta: f64, alpha: Complex64, beta: Complex64) -> Self {
        EntangledCoherentState { theta, alpha, beta }
    }

    /// `α = β = |α| e^{iφ}`, the family used for entanglement-assisted conversion.
    pub fn symmetric(theta: f64, amplitude: f64, phase: f64) -> Self {
        let a = Complex64::from_polar(amplitude, phase);
        EntangledCoherentState { theta, alpha: a, beta: a }
    }

    /// `φ = arg α`.
    pub fn phase(&self) -> f64 {
        self.alpha.arg()
    }

    /// Branch overlap `⟨α,0|0,β⟩ = e^{−(|α|²+|β|²)/2}`.
    fn branch_overlap(&self) -> f64 {
        (-(self.alpha.norm_sqr() + self.beta.norm_sqr()) / 2.0).exp()
    }

    /// `N⁻² = 1 + sin 2θ · e^{−(|α|²+|β|²)/2}`.
    pub fn inverse_norm_sq(&self) -> f64 {
        let s = (2.0 * self.theta).sin();
        let x = (self.alpha.norm_sqr() + self.beta.norm_sqr()) / 2.0;
        // (1 + s) − s(1 − e^{−x}) keeps full precision when s → −1.
        (1.0 + s) + s * (-x).exp_m1()
    }

    fn checked_inverse_norm_sq(&self) -> Result<f64> {
        let inv = self.inverse_norm_sq();
        if !inv.is_finite() || inv <= 0.0 {
            return Err(Error::DegenerateState { inverse_norm_sq: inv });
        }
        Ok(inv)
    }

    /// Normalization constant `N`.
    pub fn normalization(&self) -> Result<f64> {
        Ok(self.checked_inverse_norm_sq()?.sqrt().recip())
    }

    /// Concurrence of the two-branch superposition, in `[0, 1]`.
    pub fn concurrence(&self) -> Result<f64> {
        let inv = self.checked_inverse_norm_sq()?;
        let s = (2.0 * self.theta).sin().abs();
        let ca = -(-self.alpha.norm_sqr()).exp_m1();
        let cb = -(-self.beta.norm_sqr()).exp_m1();
        Ok((s * (ca * cb).sqrt() / inv).clamp(0.0, 1.0))
    }

    /// `⟨c_o(0)⟩` and `⟨c_w(0)⟩`.
    pub fn field_means(&self) -> Result<FieldMeans> {
        let n2 = self.checked_inverse_norm_sq()?.recip();
        let (sin, cos) = self.theta.sin_cos();
        let cross = 0.5 * (2.0 * self.theta).sin() * self.branch_overlap();
        Ok(FieldMeans {
            optical: self.alpha * (n2 * (cos * cos + cross)),
            microwave: self.beta * (n2 * (sin * sin + cross)),
        })
    }
}

/// Concurrence of `N[μ|η⟩|γ⟩ + ν|ξ⟩|δ⟩]` from its branch amplitudes and the
/// single-mode overlaps `p1 = ⟨η|ξ⟩`, `p2 = ⟨γ|δ⟩`:
/// `C = 2|μ||ν| N² √((1−|p1|²)(1−|p2|²))`.
pub fn generic_concurrence(mu: Complex64, nu: Complex64, p1: Complex64, p2: Complex64, norm: f64) -> Result<f64> {
    for p in [p1, p2] {
        if p.norm() > 1.0 {
            return Err(Error::InvalidOverlap { magnitude: p.norm() });
        }
    }
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::param(format!("normalization must be > 0, got {norm}")));
    }
    Ok(2.0 * mu.norm() * nu.norm() * norm * norm * ((1.0 - p1.norm_sqr()) * (1.0 - p2.norm_sqr())).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(EntangledCoherentState::new(0.0, c(1.3, 0.2), c(-0.4, 2.0)).normalization().unwrap(), 1.0);
        let n = EntangledCoherentState::new(FRAC_PI_4, c(0.0, 0.0), c(0.0, 0.0)).normalization().unwrap();
        assert!((n - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            EntangledCoherentState::new(-FRAC_PI_4, c(0.0, 0.0), c(0.0, 0.0)).normalization(),
            Err(Error::DegenerateState { .. })
        ));
    }

    #[test]
    fn concurrence_examples() {
        assert_eq!(EntangledCoherentState::new(0.0, c(1.0, 0.0), c(1.0, 0.0)).concurrence().unwrap(), 0.0);
        for a in [0.3, 1.0, 2.5] {
            let s = EntangledCoherentState::new(-FRAC_PI_4, c(a, 0.0), c(a, 0.0));
            assert!((s.concurrence().unwrap() - 1.0).abs() < 1e-12, "a = {a}");
        }
        let e = (-1.0f64).exp();
        let s = EntangledCoherentState::new(FRAC_PI_4, c(1.0, 0.0), c(1.0, 0.0));
        assert!((s.concurrence().unwrap() - (1.0 - e) / (1.0 + e)).abs() < 1e-15);
    }

    #[test]
    fn concurrence_matches_generic_form() {
        let s = EntangledCoherentState::new(FRAC_PI_4, c(1.0, 0.0), c(1.0, 0.0));
        let p = c((-0.5f64).exp(), 0.0);
        let generic = generic_concurrence(
            c(FRAC_PI_4.cos(), 0.0),
            c(FRAC_PI_4.sin(), 0.0),
            p,
            p,
            s.normalization().unwrap(),
        )
        .unwrap();
        assert!((generic - s.concurrence().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn generic_concurrence_examples() {
        let z = c(0.0, 0.0);
        assert_eq!(generic_concurrence(c(1.0, 0.0), z, z, z, 1.0).unwrap(), 0.0);
        let h = c(0.5f64.sqrt(), 0.0);
        assert!((generic_concurrence(h, h, z, z, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(generic_concurrence(h, h, c(1.1, 0.0), z, 1.0), Err(Error::InvalidOverlap { .. })));
    }

    #[test]
    fn field_mean_examples() {
        let s = EntangledCoherentState::new(0.0, c(2.0, 1.0), c(5.0, -3.0));
        let m = s.field_means().unwrap();
        assert!((m.optical - c(2.0, 1.0)).norm() < 1e-15);
        assert_eq!(m.microwave, c(0.0, 0.0));

        let m = EntangledCoherentState::new(FRAC_PI_4, c(1.0, 0.0), c(1.0, 0.0)).field_means().unwrap();
        assert!((m.optical - c(0.5, 0.0)).norm() < 1e-15);
        assert!((m.microwave - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vacuum_has_zero_means() {
        let m = EntangledCoherentState::new(0.3, c(0.0, 0.0), c(0.0, 0.0)).field_means().unwrap();
        assert_eq!(m.optical, c(0.0, 0.0));
        assert_eq!(m.microwave, c(0.0, 0.0));
    }

    #[test]
    fn product_limits_have_no_entanglement() {
        for theta in [0.0, FRAC_PI_2] {
            let s = EntangledCoherentState::new(theta, c(0.8, 0.1), c(-1.2, 0.4));
            assert!(s.concurrence().unwrap() < 1e-15);
        }
    }

    #[test]
    fn json_shape() {
        let s = EntangledCoherentState::new(0.5, c(1.0, -2.0), c(3.0, 4.0));
        let v = serde_json::to_value(s).unwrap();
        assert_eq!(v, serde_json::json!({"theta": 0.5, "alpha_re": 1.0, "alpha_im": -2.0, "beta_re": 3.0, "beta_im": 4.0}));
        let back: EntangledCoherentState = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn amp() -> impl Strategy<Value = Complex64> {
            (0.0f64..3.0, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, p)| Complex64::from_polar(r, p))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn concurrence_in_unit_interval(theta in -3.2f64..3.2, a in amp(), b in amp()) {
                let s = EntangledCoherentState::new(theta, a, b);
                if let Ok(c) = s.concurrence() {
                    prop_assert!((0.0..=1.0).contains(&c));
                }
            }

            #[test]
            fn concurrence_symmetric_under_branch_swap(theta in -1.5f64..1.5, a in amp(), b in amp()) {
                let s = EntangledCoherentState::new(theta, a, b);
                let swapped = EntangledCoherentState::new(FRAC_PI_2 - theta, b, a);
                if let (Ok(x), Ok(y)) = (s.concurrence(), swapped.concurrence()) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }

            #[test]
            fn closed_form_concurrence_matches_generic(theta in -3.2f64..3.2, a in amp(), b in amp()) {
                let s = EntangledCoherentState::new(theta, a, b);
                prop_assume!(s.inverse_norm_sq() > 1e-3);
                let generic = generic_concurrence(
                    Complex64::new(theta.cos(), 0.0),
                    Complex64::new(theta.sin(), 0.0),
                    Complex64::new((-a.norm_sqr() / 2.0).exp(), 0.0),
                    Complex64::new((-b.norm_sqr() / 2.0).exp(), 0.0),
                    s.normalization().unwrap(),
                ).unwrap();
                prop_assert!((generic - s.concurrence().unwrap()).abs() < 1e-12);
            }
        }
    }
}
