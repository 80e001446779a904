//! Brute-force verification in a truncated three-mode number basis.
//!
//! Nothing here uses the Heisenberg coefficient solution: states are built
//! amplitude by amplitude, evolved under the linearized Hamiltonian in the
//! Schrödinger picture, and measured with truncated ladder operators.
//! Truncation is the dominant error source, so every prepared state carries
//! its leakage and every evolved state can report the population sitting on
//! the cutoff.

mod basis;
mod evolve;
mod hamiltonian;
mod oracle;
mod state;

pub use basis::{FockBasisSpec, DEFAULT_MAX_DIMENSION};
pub use evolve::{evolve, evolve_expm, evolve_trajectory, DENSE_EXPM_MAX_DIMENSION};
pub use hamiltonian::{build_hamiltonian, SparseHamiltonian};
pub use oracle::{oracle_conversion, OracleConversion, OracleOptions};
pub use state::{coherent_amplitudes, prepare_state, FockVector, InitialState, DEFAULT_LEAKAGE_THRESHOLD};
