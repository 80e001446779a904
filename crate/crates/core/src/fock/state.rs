use num_complex::Complex64;

use super::FockBasisSpec;
use crate::error::{Error, Result};
use crate::model::ChannelId;
use crate::states::EntangledCoherentState;

pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-8;

/// Initial three-mode state for the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// Entangled coherent field state tensored with a mechanical coherent state.
    Entangled { state: EntangledCoherentState, mechanical: Complex64 },
    /// `|optical⟩ ⊗ |microwave⟩ ⊗ |mechanical⟩`, all coherent.
    Product { optical: Complex64, microwave: Complex64, mechanical: Complex64 },
}

/// Amplitude vector over the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    basis: FockBasisSpec,
    amplitudes: Vec<Complex64>,
    /// `1 − ‖ψ_truncated‖²` before renormalisation.
    leakage: f64,
}

/// `e^{−|a|²/2} aⁿ / √n!` for `n = 0..=cutoff`.
pub fn coherent_amplitudes(amplitude: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-amplitude.norm_sqr() / 2.0).exp(), 0.0);
    out.push(c);
    for n in 1..=cutoff {
        c = c * amplitude / (n as f64).sqrt();
        out.push(c);
    }
    out
}

fn vacuum_amplitudes(cutoff: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::default(); cutoff + 1];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

/// Builds the truncated vector, renormalises it, and fails when the weight
/// lost above the cutoff exceeds `leakage_threshold`.
pub fn prepare_state(initial: &InitialState, basis: &FockBasisSpec, leakage_threshold: f64) -> Result<FockVector> {
    let cutoff = basis.cutoff();
    let mut amplitudes = vec![Complex64::default(); basis.dimension()];
    let mut add_product = |weight: Complex64, o: &[Complex64], w: &[Complex64], m: &[Complex64]| {
        for (no, co) in o.iter().enumerate() {
            for (nw, cw) in w.iter().enumerate() {
                let ow = weight * co * cw;
                if ow == Complex64::default() {
                    continue;
                }
                for (nm, cm) in m.iter().enumerate() {
                    amplitudes[basis.index(no, nw, nm)] += ow * cm;
                }
            }
        }
    };

    match *initial {
        InitialState::Product { optical, microwave, mechanical } => {
            add_product(
                Complex64::new(1.0, 0.0),
                &coherent_amplitudes(optical, cutoff),
                &coherent_amplitudes(microwave, cutoff),
                &coherent_amplitudes(mechanical, cutoff),
            );
        }
        InitialState::Entangled { state, mechanical } => {
            let norm = state.normalization()?;
            let (sin, cos) = state.theta.sin_cos();
            let vac = vacuum_amplitudes(cutoff);
            let mech = coherent_amplitudes(mechanical, cutoff);
            add_product(Complex64::new(norm * cos, 0.0), &coherent_amplitudes(state.alpha, cutoff), &vac, &mech);
            add_product(Complex64::new(norm * sin, 0.0), &vac, &coherent_amplitudes(state.beta, cutoff), &mech);
        }
    }

    let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let leakage = (1.0 - norm_sq).max(0.0);
    if leakage > leakage_threshold {
        return Err(Error::Truncation { leakage, threshold: leakage_threshold });
    }
    let scale = norm_sq.sqrt().recip();
    amplitudes.iter_mut().for_each(|a| *a *= scale);
    Ok(FockVector { basis: *basis, amplitudes, leakage })
}

impl FockVector {
    pub fn from_amplitudes(basis: FockBasisSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::param(format!(
                "expected {} amplitudes, got {}",
                basis.dimension(),
                amplitudes.len()
            )));
        }
        Ok(FockVector { basis, amplitudes, leakage: 0.0 })
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        FockVector { basis: self.basis, amplitudes, leakage: self.leakage }
    }

    pub fn basis(&self) -> &FockBasisSpec {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨ψ|a_j|ψ⟩` with the truncated annihilation operator of `channel`.
    pub fn expectation(&self, channel: ChannelId) -> Complex64 {
        let b = &self.basis;
        let mut acc = Complex64::default();
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let (o, w, m) = b.occupations(i);
            // a_j |…, n, …⟩ = √n |…, n−1, …⟩
            let (n, target) = match channel {
                ChannelId::Optical if o > 0 => (o, b.index(o - 1, w, m)),
                ChannelId::Microwave if w > 0 => (w, b.index(o, w - 1, m)),
                ChannelId::Mechanical if m > 0 => (m, b.index(o, w, m - 1)),
                _ => continue,
            };
            acc += self.amplitudes[target].conj() * amp * (n as f64).sqrt();
        }
        acc
    }

    /// Probability that any mode sits on the cutoff level; growth of this
    /// number during evolution signals that the truncation is too tight.
    pub fn boundary_population(&self) -> f64 {
        let top = self.basis.cutoff();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let (o, w, m) = self.basis.occupations(*i);
                o == top || w == top || m == top
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn distance(&self, other: &FockVector) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}
