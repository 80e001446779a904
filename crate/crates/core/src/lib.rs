pub mod cli;
pub mod conversion;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod integrator;
pub mod model;
pub mod states;

pub use error::{Error, Result};
