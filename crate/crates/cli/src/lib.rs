//! modqed: simulation of photon creation from vacuum under modulated
//! circuit-QED parameters (AJC, JC, DCE and bichromatic resonances).
//!
//! The binary is a thin wrapper over this library; integration tests drive
//! scenarios through the same code paths as the CLI.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;
pub mod scenario;
pub mod sweep;
