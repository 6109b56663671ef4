//! Dynamics of a two-level atom coupled to a single cavity mode whose
//! parameters (atomic frequency or atom-cavity coupling) carry a small,
//! externally prescribed time modulation.
//!
//! The crate evolves the full Rabi Hamiltonian exactly on a truncated
//! qubit ⊗ Fock space and constructs the effective time-independent models
//! that describe the resonant regimes: anti-Jaynes-Cummings (photon plus
//! atomic excitation from vacuum), Jaynes-Cummings (off-resonant population
//! transfer), the dynamical-Casimir-effect analog (photon pair creation),
//! and the bichromatic-coupling variants.
//!
//! All frequencies are angular and the cavity frequency ω is the natural
//! unit (ω = 1 in every preset). The crate is `no_std`-compatible with
//! `alloc`; IO, configuration and the CLI live in the companion crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod effective;
pub mod eig;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod observables;
pub mod solver;

pub use error::Error;

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;
