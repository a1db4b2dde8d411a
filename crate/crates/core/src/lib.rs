//! Rayleigh surface acoustic waves on piezomagnetic half-spaces.
//!
//! The crate solves the classical surface mode of a cubic piezomagnetic
//! crystal cut so that the wave travels along [110], quantizes it in a
//! square waveguide, evaluates the zero-point magnetic field and turns that
//! into coupling strengths for a handful of quantum systems. The last piece
//! integrates the delay-differential equations for two qubits exchanging
//! phonons through a waveguide and reports their concurrence.
//!
//! All quantities are SI unless a name says otherwise.

pub mod constants;
pub mod coupling;
pub mod dynamics;
mod error;
pub mod materials;
pub mod par;
pub mod numfmt;
mod poly;
pub mod quantize;
pub mod rayleigh;
pub mod verify;

pub use error::{Error, Result};
pub use materials::{MaterialParams, MaterialSet, RotatedConstants};
pub use rayleigh::{Coupling, RayleighMode};

