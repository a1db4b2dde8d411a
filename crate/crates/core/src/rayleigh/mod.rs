//! Classical Rayleigh-type surface mode along [110].
//!
//! A mode is a sum of decaying partial waves `e^{-k q_n z}` that leaves the
//! free surface traction-free and matches the magnetic potential onto the
//! vacuum solution `e^{kz}` above it.

mod boundary;
mod fields;
mod partial;
mod solve;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use boundary::{boundary_determinant, boundary_determinant_with};
pub use fields::{evaluate_fields, evaluate_stress, FieldSample};
pub use partial::{
    characteristic_matrix, characteristic_matrix_with, decay_roots, decay_roots_with, PartialWave,
};
pub use solve::{solve_mode, solve_mode_at_frequency, solve_mode_with, SCAN_SAMPLES};

/// How the magnetic potential feeds back on the lattice.
///
/// `OneWay` solves the mechanics with the elastic stiffness alone and lets
/// the strain drive the potential through Gauss's law and the surface
/// condition. `Full` keeps the piezomagnetic stress in the equations of
/// motion and in the traction condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    #[default]
    OneWay,
    Full,
}

/// Dimensionless parameters of the complex-pair form
///
/// u1 = 2 U0 e^{-k qa z} cos(k qb z + theta)
/// u3 = -2i U0 |gamma| e^{-k qa z} cos(k qb z + theta + xi)
/// psi = i psi0 [2 A e^{-k qa z} cos(k qb z + theta + tau) + A3 e^{-kz}]
///
/// with psi0 = q33 U0 / mu11 and a common factor e^{i(kx' - wt)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub q_alpha: f64,
    pub q_beta: f64,
    pub theta: f64,
    pub gamma_abs: f64,
    pub xi: f64,
    pub a_coef: f64,
    pub tau: f64,
    pub a3_coef: f64,
}

/// Amplitudes of one partial wave per unit U0: u1 and u3 dimensionless, psi in A/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeWave {
    pub q: Complex64,
    pub u1: Complex64,
    pub u3: Complex64,
    pub psi: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighMode {
    pub material: String,
    pub coupling: Coupling,
    /// rad/m
    pub k: f64,
    /// rad/s
    pub omega: f64,
    /// m/s
    pub v: f64,
    /// Present when the mechanical waves form one complex-conjugate pair.
    pub canonical: Option<CanonicalParams>,
    pub waves: Vec<ModeWave>,
    /// Sign changes of the boundary determinant found in the scan.
    pub roots_found: usize,
    /// |boundary determinant| at the converged velocity.
    pub residual: f64,
    /// q33 = 0: every magnetic output is zero.
    pub magnetically_inert: bool,
}

impl RayleighMode {
    /// The same mode at another wavenumber; only k and omega change.
    pub fn with_wavenumber(&self, k: f64) -> RayleighMode {
        RayleighMode {
            k,
            omega: k * self.v,
            ..self.clone()
        }
    }

    pub fn wavelength(&self) -> f64 {
        crate::constants::TWO_PI / self.k
    }

    pub fn frequency_hz(&self) -> f64 {
        self.omega / crate::constants::TWO_PI
    }

    /// Smallest decay constant of the mechanical partial waves.
    pub fn slowest_decay(&self) -> f64 {
        self.waves
            .iter()
            .filter(|w| w.u1.norm() > 0.0 || w.u3.norm() > 0.0)
            .map(|w| w.q.re)
            .fold(f64::INFINITY, f64::min)
            .min(1.0)
    }
}
