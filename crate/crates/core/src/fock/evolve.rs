use nalgebra::DVector;
use num_complex::Complex64;

use super::{FockVector, SparseHamiltonian};
use crate::error::{Error, Result};
use crate::integrator::{ComplexSystem, Dopri5, StepControl};

/// Dense matrix exponentials are offered as a second route up to this size.
pub const DENSE_EXPM_MAX_DIMENSION: usize = 1000;

/// Per-step tolerance is this fraction of the caller's norm tolerance.
const STEP_TOLERANCE_FRACTION: f64 = 1e-2;

struct Schrodinger<'a> {
    hamiltonian: &'a SparseHamiltonian,
}

impl ComplexSystem for Schrodinger<'_> {
    fn dimension(&self) -> usize {
        self.hamiltonian.dimension()
    }

    fn rhs(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        self.hamiltonian.apply(y, dy);
        for d in dy.iter_mut() {
            // −i H ψ
            *d = Complex64::new(d.im, -d.re);
        }
    }
}

/// `e^{−iHt}|ψ⟩` by adaptive Runge–Kutta integration. Fails if the norm
/// drifts by more than `tol`.
pub fn evolve(psi: &FockVector, hamiltonian: &SparseHamiltonian, t: f64, tol: f64) -> Result<FockVector> {
    Ok(evolve_trajectory(psi, hamiltonian, &[t], tol)?.remove(0))
}

/// States at each of a non-decreasing sequence of times, in one pass.
pub fn evolve_trajectory(
    psi: &FockVector,
    hamiltonian: &SparseHamiltonian,
    times: &[f64],
    tol: f64,
) -> Result<Vec<FockVector>> {
    if hamiltonian.dimension() != psi.amplitudes().len() {
        return Err(Error::param("state and Hamiltonian dimensions differ"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param(format!("tolerance must be > 0, got {tol}")));
    }
    if let Some(bad) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::param(format!("time must be finite and >= 0, got {bad}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("output times must be non-decreasing"));
    }

    let system = Schrodinger { hamiltonian };
    let control = StepControl::new((tol * STEP_TOLERANCE_FRACTION).max(1e-15));
    let mut stepper = Dopri5::new(&system, control, 0.0, psi.amplitudes());
    let initial_norm = psi.norm_sqr();
    times
        .iter()
        .map(|&t| {
            stepper.advance_to(t)?;
            let out = psi.with_amplitudes(stepper.state().to_vec());
            let drift = (out.norm_sqr() - initial_norm).abs();
            if drift > tol {
                return Err(Error::IntegrationFailure {
                    last_good_time: t,
                    reason: format!("norm drift {drift:e} exceeds {tol:e}"),
                });
            }
            Ok(out)
        })
        .collect()
}

/// `e^{−iHt}|ψ⟩` through a dense matrix exponential; independent of the
/// integrator and limited to small bases.
pub fn evolve_expm(psi: &FockVector, hamiltonian: &SparseHamiltonian, t: f64) -> Result<FockVector> {
    let dimension = hamiltonian.dimension();
    if dimension > DENSE_EXPM_MAX_DIMENSION {
        return Err(Error::ResourceLimit { dimension, limit: DENSE_EXPM_MAX_DIMENSION });
    }
    if dimension != psi.amplitudes().len() {
        return Err(Error::param("state and Hamiltonian dimensions differ"));
    }
    let generator = hamiltonian.to_dense() * Complex64::new(0.0, -t);
    let propagated = generator.exp() * DVector::from_column_slice(psi.amplitudes());
    Ok(psi.with_amplitudes(propagated.iter().copied().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_hamiltonian, prepare_state, FockBasisSpec, InitialState};
    use crate::model::CouplingConfig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(k: f64, cutoff: usize) -> (FockVector, SparseHamiltonian) {
        let basis = FockBasisSpec::new(cutoff).unwrap();
        let h = build_hamiltonian(&CouplingConfig::unit(k).unwrap(), &basis).unwrap();
        let initial = InitialState::Product { optical: c(0.3, 0.1), microwave: c(-0.2, 0.0), mechanical: c(0.0, 0.25) };
        (prepare_state(&initial, &basis, 1e-6).unwrap(), h)
    }

    #[test]
    fn zero_time_is_identity() {
        let (psi, h) = setup(0.4, 6);
        assert_eq!(evolve(&psi, &h, 0.0, 1e-10).unwrap(), psi);
    }

    #[test]
    fn forward_then_backward_returns() {
        let (psi, h) = setup(0.4, 8);
        let there = evolve(&psi, &h, 2.0, 1e-10).unwrap();
        let back = evolve(&there, &h.scaled(-1.0), 2.0, 1e-10).unwrap();
        assert!(back.distance(&psi) < 1e-9, "distance {}", back.distance(&psi));
    }

    #[test]
    fn integrator_and_expm_agree() {
        let (psi, h) = setup(0.5, 6);
        let a = evolve(&psi, &h, 1.7, 1e-10).unwrap();
        let b = evolve_expm(&psi, &h, 1.7).unwrap();
        assert!(a.distance(&b) < 1e-9, "distance {}", a.distance(&b));
    }

    #[test]
    fn expm_refuses_large_bases() {
        let (psi, h) = setup(0.5, 10);
        assert!(matches!(evolve_expm(&psi, &h, 1.0), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn norm_and_energy_are_conserved() {
        let (psi, h) = setup(0.6, 10);
        let e0 = h.expectation(psi.amplitudes());
        let times: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
        for s in evolve_trajectory(&psi, &h, &times, 1e-9).unwrap() {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
            assert!((h.expectation(s.amplitudes()) - e0).abs() < 1e-8);
        }
    }
}
