use std::f64::consts::PI;

use serde::Serialize;

use super::{closed_form_propagator, PropagatorCoefficients};
use crate::error::{Error, Result};
use crate::model::CouplingConfig;

pub const DEFAULT_DECOUPLING_TOL: f64 = 1e-10;

/// A dynamically-dark instant `t_n = nπ/Ω` with odd `n`, where both field
/// modes carry no mechanical component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarkModeRecord {
    pub index: u32,
    pub time: f64,
    pub coefficients: PropagatorCoefficients,
}

/// The first `count` dark instants, `n = 1, 3, 5, …`.
///
/// Even `n` are skipped: there the propagator is the identity, so nothing
/// has been converted.
pub fn dark_mode_times(cfg: &CouplingConfig, count: usize) -> Result<Vec<DarkModeRecord>> {
    if count == 0 {
        return Err(Error::param("dark-mode count must be >= 1"));
    }
    (0..count)
        .map(|i| {
            let index = u32::try_from(2 * i + 1).map_err(|_| Error::param("dark-mode count too large"))?;
            let time = f64::from(index) * PI / cfg.omega();
            let coefficients = closed_form_propagator(cfg, time)?;
            Ok(DarkModeRecord { index, time, coefficients })
        })
        .collect()
}

/// True when the mechanical admixtures `f2, f3, g3, h3` are all below `tol`.
pub fn is_dynamically_dark(coeffs: &PropagatorCoefficients, tol: f64) -> bool {
    let worst = [coeffs.f[1], coeffs.f[2], coeffs.g[2], coeffs.h[2]].iter().map(|c| c.norm()).fold(0.0, f64::max);
    worst < tol
}
