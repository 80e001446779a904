//! Heisenberg-picture coefficient dynamics of the linearized converter.
//!
//! Every mode operator at time `t` is a linear combination of three initial
//! operators:
//!
//! ```text
//! b(t)   = f1 b(0)   + f2 c_w(0)  + f3 c_o†(0)
//! c_o(t) = g1 c_o(0) + g2 c_w†(0) + g3 b†(0)
//! c_w(t) = h1 c_w(0) + h2 c_o†(0) + h3 b(0)
//! ```
//!
//! [`closed_form_propagator`] evaluates the analytic solution and
//! [`ode_propagator`] integrates the coefficient equations numerically as an
//! independent check.

mod closed_form;
mod dark;
mod ode;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use closed_form::{closed_form_propagator, dark_coefficients};
pub use dark::{dark_mode_times, is_dynamically_dark, DarkModeRecord, DEFAULT_DECOUPLING_TOL};
pub use ode::{ode_propagator, ode_trajectory, CoefficientSystem, ToleranceSpec};

/// The nine coefficient functions at one instant.
///
/// `f`, `g` and `h` hold the mechanical, optical and microwave rows
/// respectively, indexed `[0] = f1` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorCoefficients {
    pub time: f64,
    pub f: [Complex64; 3],
    pub g: [Complex64; 3],
    pub h: [Complex64; 3],
}

/// Deviations of the five equal-time commutators from their canonical values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    /// `|f1|² + |f2|² − |f3|² − 1`
    pub mechanical: f64,
    /// `|g1|² − |g2|² − |g3|² − 1`
    pub optical: f64,
    /// `|h1|² − |h2|² + |h3|² − 1`
    pub microwave: f64,
    /// `[b(t), c_o(t)] = f1 g3 + f2 g2 − f3 g1`
    pub mech_optical: Complex64,
    /// `[b(t), c_w†(t)] = f1 h3* + f2 h1* − f3 h2*`
    pub mech_microwave: Complex64,
}

impl CommutatorResiduals {
    pub fn max_abs(&self) -> f64 {
        self.mechanical
            .abs()
            .max(self.optical.abs())
            .max(self.microwave.abs())
            .max(self.mech_optical.norm())
            .max(self.mech_microwave.norm())
    }
}

impl PropagatorCoefficients {
    /// Coefficients at `t = 0`: every operator equals itself.
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        PropagatorCoefficients { time: 0.0, f: [one, zero, zero], g: [one, zero, zero], h: [one, zero, zero] }
    }

    /// Flat order `f1 f2 f3 g1 g2 g3 h1 h2 h3`.
    pub fn to_array(&self) -> [Complex64; 9] {
        let [f1, f2, f3] = self.f;
        let [g1, g2, g3] = self.g;
        let [h1, h2, h3] = self.h;
        [f1, f2, f3, g1, g2, g3, h1, h2, h3]
    }

    pub fn from_array(time: f64, v: &[Complex64]) -> Self {
        assert_eq!(v.len(), 9, "expected nine coefficients");
        PropagatorCoefficients { time, f: [v[0], v[1], v[2]], g: [v[3], v[4], v[5]], h: [v[6], v[7], v[8]] }
    }

    pub fn commutator_residuals(&self) -> CommutatorResiduals {
        let [f1, f2, f3] = self.f;
        let [g1, g2, g3] = self.g;
        let [h1, h2, h3] = self.h;
        CommutatorResiduals {
            mechanical: f1.norm_sqr() + f2.norm_sqr() - f3.norm_sqr() - 1.0,
            optical: g1.norm_sqr() - g2.norm_sqr() - g3.norm_sqr() - 1.0,
            microwave: h1.norm_sqr() - h2.norm_sqr() + h3.norm_sqr() - 1.0,
            mech_optical: f1 * g3 + f2 * g2 - f3 * g1,
            mech_microwave: f1 * h3.conj() + f2 * h1.conj() - f3 * h2.conj(),
        }
    }

    /// Largest component-wise distance to another coefficient set.
    pub fn max_abs_diff(&self, other: &PropagatorCoefficients) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Mean amplitudes `[⟨c_o⟩, ⟨c_w⟩, ⟨b⟩]` at this time given their initial values.
    pub fn propagate_means(&self, initial: [Complex64; 3]) -> [Complex64; 3] {
        let [o, w, b] = initial;
        let [f1, f2, f3] = self.f;
        let [g1, g2, g3] = self.g;
        let [h1, h2, h3] = self.h;
        [g1 * o + g2 * w.conj() + g3 * b.conj(), h1 * w + h2 * o.conj() + h3 * b, f1 * b + f2 * w + f3 * o.conj()]
    }

    /// Names in flat order, for serialisation headers.
    pub const NAMES: [&'static str; 9] = ["f1", "f2", "f3", "g1", "g2", "g3", "h1", "h2", "h3"];
}
