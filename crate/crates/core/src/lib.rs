//! Statevector quantum simulation and quantum-driven note generators.

pub mod basak_miranda;
pub mod error;
pub mod markov;
pub mod music;
pub mod qsim;
pub mod qwalk;
pub mod seed;

pub use error::{Error, Result};
