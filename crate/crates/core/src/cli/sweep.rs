use num_complex::Complex64;
use rayon::prelude::*;

use super::dataset::{Cell, Dataset};
use super::grid::Grid;
use crate::conversion::{cqc_rate, eaf, eaqc_rate, Direction};
use crate::dynamics::{
    closed_form_propagator, dark_mode_times, ode_propagator, PropagatorCoefficients, ToleranceSpec,
};
use crate::error::Result;
use crate::model::CouplingConfig;
use crate::states::EntangledCoherentState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorMethod {
    Closed,
    Ode,
}

/// One subcommand's worth of work: which quantity, over which grid, with
/// which fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    Propagator { config: CouplingConfig, time: f64, method: PropagatorMethod, tolerance: ToleranceSpec },
    DarkTimes { config: CouplingConfig, count: usize },
    CqcRate { ratio: Grid },
    EaqcRate { ratio: f64, theta: f64, phase: Grid, amplitude: f64, direction: Direction },
    Eaf { ratio: Grid, phase: f64 },
    Concurrence { state: EntangledCoherentState },
}

/// `name_re, name_im` for each of the nine coefficients.
fn coefficient_columns() -> Vec<String> {
    PropagatorCoefficients::NAMES.iter().flat_map(|n| [format!("{n}_re"), format!("{n}_im")]).collect()
}

fn coefficient_cells(c: &PropagatorCoefficients) -> impl Iterator<Item = Cell> {
    c.to_array().into_iter().flat_map(|z| [Cell::Real(z.re), Cell::Real(z.im)])
}

fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Real(z.re), Cell::Real(z.im)]
}

/// Evaluates `f` at every grid point in parallel, keeping grid order.
fn tabulate<F>(grid: &Grid, f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> Result<Vec<Cell>> + Sync + Send,
{
    grid.points().into_par_iter().map(f).collect()
}

impl SweepSpec {
    pub fn run(&self) -> Result<Dataset> {
        match self {
            SweepSpec::Propagator { config, time, method, tolerance } => {
                let coeffs = match method {
                    PropagatorMethod::Closed => closed_form_propagator(config, *time)?,
                    PropagatorMethod::Ode => ode_propagator(config, *time, *tolerance)?,
                };
                let mut columns = vec!["t".to_owned(), "k".into(), "omega".into()];
                columns.extend(coefficient_columns());
                columns.push("commutator_residual".into());
                let mut d = Dataset::new("propagator", columns)
                    .with_parameter("optical_coupling", format!("{:?}", config.optical_coupling()))
                    .with_parameter("microwave_coupling", format!("{:?}", config.microwave_coupling()))
                    .with_parameter("method", method_name(*method));
                if *method == PropagatorMethod::Ode {
                    d = d.with_parameter("tolerance", format!("{:?}", tolerance.value()));
                }
                let mut row = vec![Cell::Real(coeffs.time), config.ratio().into(), config.omega().into()];
                row.extend(coefficient_cells(&coeffs));
                row.push(coeffs.commutator_residuals().max_abs().into());
                d.push_row(row);
                Ok(d)
            }
            SweepSpec::DarkTimes { config, count } => {
                let mut columns = vec!["n".to_owned(), "t".into()];
                columns.extend(coefficient_columns());
                let mut d = Dataset::new("dark-times", columns)
                    .with_parameter("optical_coupling", format!("{:?}", config.optical_coupling()))
                    .with_parameter("microwave_coupling", format!("{:?}", config.microwave_coupling()))
                    .with_parameter("count", count);
                for rec in dark_mode_times(config, *count)? {
                    let mut row = vec![Cell::Int(rec.index.into()), rec.time.into()];
                    row.extend(coefficient_cells(&rec.coefficients));
                    d.push_row(row);
                }
                Ok(d)
            }
            SweepSpec::CqcRate { ratio } => {
                let mut d = Dataset::new("cqc-rate", ["k", "eta"]).with_parameter("k_grid", ratio);
                d.rows = tabulate(ratio, |k| Ok(vec![k.into(), cqc_rate(k)?.into()]))?;
                Ok(d)
            }
            SweepSpec::EaqcRate { ratio, theta, phase, amplitude, direction } => {
                let mut d = Dataset::new("eaqc-rate", ["phi", "eta"])
                    .with_parameter("k", format!("{ratio:?}"))
                    .with_parameter("theta", format!("{theta:?}"))
                    .with_parameter("alpha_abs", format!("{amplitude:?}"))
                    .with_parameter("direction", direction)
                    .with_parameter("phi_grid", phase);
                d.rows = tabulate(phase, |phi| {
                    Ok(vec![phi.into(), eaqc_rate(*ratio, *theta, phi, *amplitude, *direction)?.into()])
                })?;
                Ok(d)
            }
            SweepSpec::Eaf { ratio, phase } => {
                let mut d = Dataset::new("eaf", ["k", "R", "regime"])
                    .with_parameter("phi", format!("{phase:?}"))
                    .with_parameter("k_grid", ratio);
                d.rows = tabulate(ratio, |k| {
                    let r = eaf(k, *phase)?;
                    Ok(vec![k.into(), r.factor.into(), Cell::Text(r.regime.to_string())])
                })?;
                Ok(d)
            }
            SweepSpec::Concurrence { state } => {
                let columns = [
                    "theta",
                    "alpha_re",
                    "alpha_im",
                    "beta_re",
                    "beta_im",
                    "normalization",
                    "concurrence",
                    "mean_o_re",
                    "mean_o_im",
                    "mean_w_re",
                    "mean_w_im",
                ];
                let mut d = Dataset::new("concurrence", columns);
                let means = state.field_means()?;
                let mut row = vec![Cell::Real(state.theta)];
                row.extend(complex_cells(state.alpha));
                row.extend(complex_cells(state.beta));
                row.push(state.normalization()?.into());
                row.push(state.concurrence()?.into());
                row.extend(complex_cells(means.optical));
                row.extend(complex_cells(means.microwave));
                d.push_row(row);
                Ok(d)
            }
        }
    }
}

fn method_name(m: PropagatorMethod) -> &'static str {
    match m {
        PropagatorMethod::Closed => "closed",
        PropagatorMethod::Ode => "ode",
    }
}
