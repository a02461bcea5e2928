//! Exact simulation, scattering and reconstruction for the ultradiscrete KdV
//! equation on finite-support rational states.

pub mod conserved;
pub mod darboux;
pub mod eigen;
pub mod error;
pub mod evolve;
pub mod rational;
pub mod scattering;
pub mod state;
pub mod texpr;

pub use error::{Error, Result};
pub use rational::Rational;
pub use state::State;
