//! Simulation of a two-level quantum emitter strongly coupled to the
//! localized surface plasmon (LSP) modes of a metal nanosphere.
//!
//! The pipeline runs from a Drude description of the metal, through the
//! multipole-resolved scattered Green's function of the sphere, to
//! per-mode Lorentzian coupling constants, a non-Hermitian effective
//! Hamiltonian with biorthogonal dressed states, emission spectra and
//! population dynamics.
//!
//! Internal unit system: energies in eV, lengths in nm, times in fs.
//! Every public operation documents the units of its inputs and outputs.

pub mod cli;
pub mod config;
pub mod constants;
pub mod coupling;
pub mod drude;
pub mod dynamics;
pub mod effective;
pub mod error;
pub mod exec;
pub mod greens;
pub mod grid;
pub mod output;
pub mod spectra;
pub mod validate;

mod bessel;
mod expm;
mod fit;

pub use error::{Error, Result};
