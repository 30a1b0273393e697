//! Two-atom absorption and emission interference for pairs prepared in
//! entangled or identical-particle states, with brute-force operator oracles.

pub mod config;
pub mod entangled;
pub mod error;
pub mod fuzz_harness;
pub mod gram;
pub mod grid;
pub mod identical;
pub mod oracle;
pub mod runner;
pub mod states;
pub mod verify;

pub use error::Error;
pub use states::{Probability, Statistics};
