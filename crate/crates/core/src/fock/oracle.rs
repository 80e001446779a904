use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{build_hamiltonian, evolve_trajectory, prepare_state, FockBasisSpec, InitialState, DEFAULT_MAX_DIMENSION};
use crate::conversion::{ConversionReport, Direction, Method};
use crate::error::{Error, Result};
use crate::model::{ChannelId, CouplingConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub cutoff: usize,
    pub max_dimension: usize,
    /// Norm tolerance handed to the evolution.
    pub tolerance: f64,
    pub leakage_threshold: f64,
    /// Intermediate samples used to monitor boundary population and energy.
    pub samples: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cutoff: 14,
            max_dimension: DEFAULT_MAX_DIMENSION,
            tolerance: 1e-10,
            leakage_threshold: super::DEFAULT_LEAKAGE_THRESHOLD,
            samples: 16,
        }
    }
}

/// Brute-force conversion at a dark instant together with the truncation
/// diagnostics needed to judge it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConversion {
    pub report: ConversionReport,
    pub time: f64,
    /// `[⟨a_o⟩, ⟨a_w⟩, ⟨b⟩]` at `t = 0`.
    pub initial_means: [Complex64; 3],
    /// The same at the dark instant.
    pub final_means: [Complex64; 3],
    pub preparation_leakage: f64,
    /// Largest cutoff-level population seen along the trajectory.
    pub max_boundary_population: f64,
    pub norm_drift: f64,
    pub energy_drift: f64,
}

/// Evolves `initial` to `t_n = nπ/Ω` and measures
/// `|⟨a_out(t_n)⟩ / ⟨a_in(0)⟩|²`.
pub fn oracle_conversion(
    cfg: &CouplingConfig,
    initial: &InitialState,
    direction: Direction,
    dark_index: u32,
    options: &OracleOptions,
) -> Result<OracleConversion> {
    if dark_index % 2 == 0 {
        return Err(Error::param(format!("dark index must be odd, got {dark_index}")));
    }
    let basis = FockBasisSpec::with_limit(options.cutoff, options.max_dimension)?;
    let hamiltonian = build_hamiltonian(cfg, &basis)?;
    let psi0 = prepare_state(initial, &basis, options.leakage_threshold)?;

    let means = |v: &super::FockVector| ChannelId::ALL.map(|c| v.expectation(c));
    let initial_means = means(&psi0);
    let (input, output) = match direction {
        Direction::OpticalToMicrowave => (0, 1),
        Direction::MicrowaveToOptical => (1, 0),
    };
    if initial_means[input].norm() == 0.0 {
        return Err(Error::UndefinedRate);
    }

    let time = f64::from(dark_index) * PI / cfg.omega();
    let samples = options.samples.max(1);
    let times: Vec<f64> = (1..=samples).map(|i| time * i as f64 / samples as f64).collect();
    let trajectory = evolve_trajectory(&psi0, &hamiltonian, &times, options.tolerance)?;

    let e0 = hamiltonian.expectation(psi0.amplitudes());
    let n0 = psi0.norm_sqr();
    let mut max_boundary = psi0.boundary_population();
    let mut energy_drift: f64 = 0.0;
    let mut norm_drift: f64 = 0.0;
    for s in &trajectory {
        max_boundary = max_boundary.max(s.boundary_population());
        energy_drift = energy_drift.max((hamiltonian.expectation(s.amplitudes()) - e0).abs());
        norm_drift = norm_drift.max((s.norm_sqr() - n0).abs());
    }
    let last = trajectory.last().expect("at least one sample");
    let final_means = means(last);

    Ok(OracleConversion {
        report: ConversionReport {
            direction,
            rate: (final_means[output] / initial_means[input]).norm_sqr(),
            dark_index,
            coupling_ratio: cfg.ratio(),
            method: Method::FockOracle,
        },
        time,
        initial_means,
        final_means,
        preparation_leakage: psi0.leakage(),
        max_boundary_population: max_boundary,
        norm_drift,
        energy_drift,
    })
}
