//! Spectra of the two-mode two-photon Rabi Hamiltonian.
//!
//! The crate builds the truncated model and its symmetry sectors
//! ([`model`]), evaluates exact sector and full-space spectra
//! ([`spectra`]), and the rotating-wave and symmetric generalized
//! rotating-wave approximations in a squeezed frame ([`approx`]).
//! Every closed-form ingredient has an independent numerical check in
//! [`verify`].

pub mod approx;
pub mod error;
pub mod linalg;
pub mod model;
pub mod special;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Branch, ModelParams, SectorKey};
