//! Dormand–Prince 5(4) with embedded error control, specialised to complex
//! state vectors.
//!
//! The error norm is the max over components of `|err_i| / tol`. For the
//! coefficient and amplitude vectors integrated here, components of
//! magnitude ≥ 1 are the ones that matter, and for those the absolute error
//! is the larger of the absolute and relative errors.

use num_complex::Complex64;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Right-hand side `dy/dt = f(t, y)` of a complex linear or nonlinear system.
pub trait ComplexSystem {
    fn dimension(&self) -> usize;
    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub tolerance: f64,
    pub max_steps: usize,
    /// Steps shorter than `min_step_fraction · |span|` count as underflow.
    pub min_step_fraction: f64,
}

impl StepControl {
    pub fn new(tolerance: f64) -> Self {
        StepControl { tolerance, max_steps: 5_000_000, min_step_fraction: 1e-14 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Stateful stepper: remembers the last accepted step size so that a
/// trajectory can be sampled at many output times without restarting.
pub struct Dopri5<'a, S: ComplexSystem> {
    system: &'a S,
    control: StepControl,
    t: f64,
    y: Vec<Complex64>,
    step: Option<f64>,
    stats: StepStats,
    k: [Vec<Complex64>; 7],
    scratch: Vec<Complex64>,
    y_new: Vec<Complex64>,
}

impl<'a, S: ComplexSystem> Dopri5<'a, S> {
    pub fn new(system: &'a S, control: StepControl, t0: f64, y0: &[Complex64]) -> Self {
        let n = system.dimension();
        assert_eq!(y0.len(), n, "initial state has wrong dimension");
        let zeros = || vec![Complex64::new(0.0, 0.0); n];
        Dopri5 {
            system,
            control,
            t: t0,
            y: y0.to_vec(),
            step: None,
            stats: StepStats::default(),
            k: [zeros(), zeros(), zeros(), zeros(), zeros(), zeros(), zeros()],
            scratch: zeros(),
            y_new: zeros(),
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[Complex64] {
        &self.y
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    pub fn into_state(self) -> Vec<Complex64> {
        self.y
    }

    fn initial_step(&mut self, span: f64) -> f64 {
        // Hairer–Wanner starting-step heuristic, first stage only.
        self.system.rhs(self.t, &self.y, &mut self.k[0]);
        let tol = self.control.tolerance;
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for (y, f) in self.y.iter().zip(&self.k[0]) {
            d0 = d0.max(y.norm() / tol);
            d1 = d1.max(f.norm() / tol);
        }
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(span.abs()).max(span.abs() * 1e-12)
    }

    /// Integrates forward to `t_end` (which must not precede the current time),
    /// landing exactly on it.
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        if t_end < self.t {
            return Err(Error::param(format!("cannot integrate backwards from {} to {t_end}", self.t)));
        }
        if t_end == self.t {
            return Ok(());
        }
        let min_step = self.control.min_step_fraction * t_end.abs().max(1.0);
        let mut h = match self.step {
            Some(h) => h,
            None => self.initial_step(t_end - self.t),
        };

        while self.t < t_end {
            if self.stats.accepted + self.stats.rejected >= self.control.max_steps {
                return Err(Error::IntegrationFailure {
                    last_good_time: self.t,
                    reason: format!("exceeded {} steps", self.control.max_steps),
                });
            }
            let remaining = t_end - self.t;
            let landing = h >= remaining;
            let h_try = if landing { remaining } else { h };
            if h_try < min_step && !landing {
                return Err(Error::IntegrationFailure {
                    last_good_time: self.t,
                    reason: format!("step size underflow (h = {h_try:e})"),
                });
            }

            let err = self.attempt(h_try);
            if !err.is_finite() {
                return Err(Error::IntegrationFailure {
                    last_good_time: self.t,
                    reason: "non-finite error estimate".into(),
                });
            }

            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };

            if err <= 1.0 {
                self.t = if landing { t_end } else { self.t + h_try };
                std::mem::swap(&mut self.y, &mut self.y_new);
                self.stats.accepted += 1;
                // A step clipped to land on the output time says nothing about
                // the attainable step size; keep the previous one.
                h = if landing && h_try < h { h } else { h_try * factor };
            } else {
                self.stats.rejected += 1;
                h = h_try * factor.min(1.0);
            }
        }
        self.step = Some(h);
        Ok(())
    }

    /// One trial step of size `h`; writes the 5th-order solution into
    /// `y_new` and returns the scaled error norm.
    fn attempt(&mut self, h: f64) -> f64 {
        let t = self.t;
        let y = &self.y;
        let sys = self.system;
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let tmp = &mut self.scratch;

        sys.rhs(t, y, k1);
        for i in 0..y.len() {
            tmp[i] = y[i] + k1[i] * (h * A21);
        }
        sys.rhs(t + C2 * h, tmp, k2);
        for i in 0..y.len() {
            tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        sys.rhs(t + C3 * h, tmp, k3);
        for i in 0..y.len() {
            tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        sys.rhs(t + C4 * h, tmp, k4);
        for i in 0..y.len() {
            tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        sys.rhs(t + C5 * h, tmp, k5);
        for i in 0..y.len() {
            tmp[i] = y[i] + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        sys.rhs(t + h, tmp, k6);
        let y_new = &mut self.y_new;
        for i in 0..y.len() {
            y_new[i] = y[i] + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
        }
        sys.rhs(t + h, y_new, k7);

        let tol = self.control.tolerance;
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            err = err.max(e.norm() / tol);
        }
        err
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// y' = -i ω y, exact solution e^{-iωt}.
    struct Rotor(f64);

    impl ComplexSystem for Rotor {
        fn dimension(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
            dy[0] = Complex64::new(0.0, -self.0) * y[0];
        }
    }

    #[test]
    fn rotor_matches_exponential() {
        let sys = Rotor(2.5);
        let mut stepper = Dopri5::new(&sys, StepControl::new(1e-11), 0.0, &[Complex64::new(1.0, 0.0)]);
        for i in 1..=50 {
            let t = 0.2 * i as f64;
            stepper.advance_to(t).unwrap();
            let exact = Complex64::new(0.0, -2.5 * t).exp();
            assert!((stepper.state()[0] - exact).norm() < 1e-9, "t = {t}");
        }
        assert!(stepper.stats().accepted > 0);
    }

    #[test]
    fn zero_span_is_a_no_op() {
        let sys = Rotor(1.0);
        let mut stepper = Dopri5::new(&sys, StepControl::new(1e-10), 0.0, &[Complex64::new(1.0, 0.0)]);
        stepper.advance_to(0.0).unwrap();
        assert_eq!(stepper.state()[0], Complex64::new(1.0, 0.0));
        assert_eq!(stepper.stats().accepted, 0);
    }

    #[test]
    fn step_budget_exhaustion_reports_last_good_time() {
        let sys = Rotor(1.0);
        let control = StepControl { max_steps: 3, ..StepControl::new(1e-12) };
        let mut stepper = Dopri5::new(&sys, control, 0.0, &[Complex64::new(1.0, 0.0)]);
        match stepper.advance_to(100.0) {
            Err(Error::IntegrationFailure { last_good_time, .. }) => assert!(last_good_time < 100.0),
            other => panic!("expected integration failure, got {other:?}"),
        }
    }

    #[test]
    fn backwards_integration_is_rejected() {
        let sys = Rotor(1.0);
        let mut stepper = Dopri5::new(&sys, StepControl::new(1e-8), 1.0, &[Complex64::new(1.0, 0.0)]);
        assert!(stepper.advance_to(0.5).is_err());
    }
}
