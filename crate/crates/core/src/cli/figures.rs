use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rayon::prelude::*;
use serde::Serialize;

use super::dataset::{Cell, Dataset};
use super::grid::Grid;
use crate::conversion::{cqc_rate, critical_coupling, eaf, eaqc_max_entangled, Regime};
use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 200;

/// Coupling ratios plotted against the entanglement phase.
pub const PHASE_FIGURE_RATIOS: [f64; 4] = [0.1, 0.2, 0.6, 0.9];

const RATIO_MAX: f64 = 0.95;

/// Relative tolerance of the periodicity check.
const PERIODICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl FigureCheck {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        FigureCheck { name: name.to_owned(), passed, detail: detail.into() }
    }
}

/// A figure's data together with the post-conditions checked on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub dataset: Dataset,
    pub checks: Vec<FigureCheck>,
}

impl Figure {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Default grid for figure `number` (2, 3 or 4).
pub fn default_grid(number: u8) -> Result<Grid> {
    match number {
        2 => Grid::new(0.0, RATIO_MAX, DEFAULT_POINTS),
        3 => Grid::new(0.0, 2.0 * PI, DEFAULT_POINTS),
        // k = 0 is excluded: the factor is 0/0 there.
        4 => Grid::new(RATIO_MAX / DEFAULT_POINTS as f64, RATIO_MAX, DEFAULT_POINTS),
        n => Err(Error::param(format!("no figure {n}; expected 2, 3 or 4"))),
    }
}

pub fn figure(number: u8, grid: Option<Grid>) -> Result<Figure> {
    let grid = match grid {
        Some(g) => g,
        None => default_grid(number)?,
    };
    match number {
        2 => conditional_rate_figure(&grid),
        3 => phase_figure(&grid),
        4 => factor_figure(&grid),
        n => Err(Error::param(format!("no figure {n}; expected 2, 3 or 4"))),
    }
}

/// Conditional conversion rate against `k`.
pub fn conditional_rate_figure(grid: &Grid) -> Result<Figure> {
    grid.require_within(0.0, RATIO_MAX, "k")?;
    let mut d = Dataset::new("figure2", ["k", "eta"]).with_parameter("k_grid", grid);
    d.rows = grid.points().into_par_iter().map(|k| Ok(vec![k.into(), cqc_rate(k)?.into()])).collect::<Result<_>>()?;

    let k = d.column("k").expect("numeric");
    let eta = d.column("eta").expect("numeric");
    let increasing = eta.windows(2).all(|w| w[1] > w[0]);
    let mut checks = vec![FigureCheck::new("strictly_increasing", increasing, "")];

    let unity = SQRT_2 - 1.0;
    let crossing = match eta.iter().position(|&e| e >= 1.0) {
        Some(0) | None if unity < grid.start() || unity > grid.stop() => {
            FigureCheck::new("unity_crossing", true, "crossing lies outside the grid")
        }
        Some(i) => {
            let passed = (k[i] - unity).abs() <= grid.resolution();
            FigureCheck::new("unity_crossing", passed, format!("first eta >= 1 at k = {:?}", k[i]))
        }
        None => FigureCheck::new("unity_crossing", false, "eta never reaches 1"),
    };
    checks.push(crossing);
    Ok(Figure { dataset: d, checks })
}

/// Maximally-entangled rate against the phase, one column per ratio.
pub fn phase_figure(grid: &Grid) -> Result<Figure> {
    grid.require_within(0.0, 2.0 * PI, "phi")?;
    let mut columns = vec!["phi".to_owned()];
    columns.extend(PHASE_FIGURE_RATIOS.iter().map(|k| format!("eta_k{k}")));
    let mut d = Dataset::new("figure3", columns)
        .with_parameter("phi_grid", grid)
        .with_parameter("theta", "pi/4");
    d.rows = grid
        .points()
        .into_par_iter()
        .map(|phi| {
            let mut row = vec![Cell::Real(phi)];
            for k in PHASE_FIGURE_RATIOS {
                row.push(eaqc_max_entangled(k, phi)?.into());
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    // Each row against a fresh evaluation half a turn away.
    let mut worst: f64 = 0.0;
    for row in &d.rows {
        let phi = row[0].as_real().expect("numeric");
        for (k, cell) in PHASE_FIGURE_RATIOS.iter().zip(&row[1..]) {
            let v = cell.as_real().expect("numeric");
            let shifted = eaqc_max_entangled(*k, phi + PI)?;
            worst = worst.max((v - shifted).abs() / v.abs().max(1.0));
        }
    }
    let checks = vec![FigureCheck::new(
        "pi_periodic",
        worst <= PERIODICITY_TOL,
        format!("max relative deviation {worst:e}"),
    )];
    Ok(Figure { dataset: d, checks })
}

/// Entanglement-affecting factor at `φ = 0` and `φ = π/2` against `k`.
pub fn factor_figure(grid: &Grid) -> Result<Figure> {
    grid.require_within(0.0, RATIO_MAX, "k")?;
    if grid.start() == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    let critical = critical_coupling();
    let mut d = Dataset::new("figure4", ["k", "R_phi0", "R_phiHalfPi", "unity_reference", "regime"])
        .with_parameter("k_grid", grid)
        .with_parameter("critical_k", format!("{critical:?}"));
    d.rows = grid
        .points()
        .into_par_iter()
        .map(|k| {
            let zero = eaf(k, 0.0)?;
            let half = eaf(k, FRAC_PI_2)?;
            Ok(vec![k.into(), zero.factor.into(), half.factor.into(), 1.0.into(), Cell::Text(half.regime.to_string())])
        })
        .collect::<Result<_>>()?;

    let k = d.column("k").expect("numeric");
    let r0 = d.column("R_phi0").expect("numeric");
    let r_half = d.column("R_phiHalfPi").expect("numeric");
    let regime = d.text_column("regime").expect("text");

    let below = r0.iter().all(|&r| r < 1.0);
    let mut checks = vec![FigureCheck::new("R_phi0_below_unity", below, "")];

    let misplaced = k
        .iter()
        .zip(&regime)
        .filter(|(&k, &label)| {
            let expect = if k < critical {
                Regime::Enhancing
            } else if k > critical {
                Regime::Suppressing
            } else {
                Regime::Neutral
            };
            // Rows within rounding of the root may legitimately read neutral.
            label != expect.to_string() && (k - critical).abs() > 1e-9
        })
        .count();
    checks.push(FigureCheck::new(
        "regime_flips_at_critical_k",
        misplaced == 0,
        format!("{misplaced} rows disagree with k_c = {critical:?}"),
    ));

    // The first row with R(π/2) >= 1 must be the first row at or past k_c.
    let slack = 1e-9;
    let (passed, detail) = match r_half.iter().position(|&r| r >= 1.0) {
        Some(0) => (critical <= k[0] + slack, format!("R(pi/2) >= 1 from the first row, k = {:?}", k[0])),
        Some(j) => (
            k[j - 1] - slack < critical && critical <= k[j] + slack,
            format!("R(pi/2) crosses 1 between k = {:?} and {:?}", k[j - 1], k[j]),
        ),
        None => (critical >= k[k.len() - 1] - slack, "R(pi/2) < 1 on every row".to_owned()),
    };
    checks.push(FigureCheck::new("R_phiHalfPi_crossing", passed, detail));
    Ok(Figure { dataset: d, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_figures_pass_their_checks() {
        for n in [2, 3, 4] {
            let f = figure(n, None).unwrap();
            assert_eq!(f.dataset.rows.len(), DEFAULT_POINTS);
            assert!(f.passed(), "figure {n}: {:?}", f.checks);
        }
        assert!(figure(5, None).is_err());
    }

    #[test]
    fn conditional_rate_rows() {
        let f = conditional_rate_figure(&Grid::new(0.0, 0.5, 3).unwrap()).unwrap();
        let eta = f.dataset.column("eta").unwrap();
        assert_eq!(eta[0], 0.0);
        assert!((eta[2] - 16.0 / 9.0).abs() < 1e-14);
        let f = conditional_rate_figure(&Grid::new(0.0, SQRT_2 - 1.0, 2).unwrap()).unwrap();
        assert!((f.dataset.column("eta").unwrap()[1] - 1.0).abs() < 1e-12);
        assert!(f.passed());
    }

    #[test]
    fn grid_bounds_are_enforced() {
        assert!(conditional_rate_figure(&Grid::new(0.0, 0.99, 10).unwrap()).is_err());
        assert!(phase_figure(&Grid::new(-0.1, 1.0, 10).unwrap()).is_err());
        assert_eq!(factor_figure(&Grid::new(0.0, 0.5, 10).unwrap()), Err(Error::DegenerateRatio));
    }

    #[test]
    fn phase_rows_at_quarter_turns() {
        let f = phase_figure(&Grid::new(0.0, PI, 3).unwrap()).unwrap();
        let col = f.dataset.column("eta_k0.6").unwrap();
        assert!((col[0] - 16.0).abs() < 1e-12);
        assert!((col[1] - 0.0625).abs() < 1e-12);
        assert_eq!(f.dataset.rows[2][1..], f.dataset.rows[0][1..]);
    }

    #[test]
    fn factor_rows_around_root() {
        let kc = 2.0 - 3f64.sqrt();
        let f = factor_figure(&Grid::new(kc, 0.5, 2).unwrap()).unwrap();
        let r0 = f.dataset.column("R_phi0").unwrap();
        let rh = f.dataset.column("R_phiHalfPi").unwrap();
        assert!((rh[0] - 1.0).abs() < 1e-9);
        assert!((r0[1] - 16.0 / 81.0).abs() < 1e-14);
        assert!((rh[1] - 16.0).abs() < 1e-12);
        assert!(f.passed(), "{:?}", f.checks);
    }
}
