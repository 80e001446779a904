//! Building blocks of the `eomconv` command-line tool: parameter grids,
//! sweeps, figure datasets, the verification suite and their output.

pub mod dataset;
pub mod figures;
pub mod grid;
pub mod plot;
pub mod sweep;
pub mod verify;

pub use dataset::{Cell, Dataset, Format};
pub use figures::{figure, Figure, FigureCheck};
pub use grid::{parse_real, Grid};
pub use sweep::{PropagatorMethod, SweepSpec};
pub use verify::{run_verify, run_verify_with, CheckResult, ClosedForm, CoefficientSource, VerifyLevel, VerifyOptions, VerifyReport};
